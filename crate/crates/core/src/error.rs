use thiserror::Error;

/// Errors raised by the library and surfaced by the CLI with a stable exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A value or table lookup falls outside the representable or covered range.
    #[error("range error: {0}")]
    Range(String),
    /// An explicit precondition of the operation is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A coefficient model is malformed or not square-summable.
    #[error("model error: {0}")]
    Model(String),
    /// A configured size limit was exceeded.
    #[error("capacity exceeded: {what} exceeds cap {cap}")]
    Capacity { what: String, cap: u64 },
    /// A truncated infinite sum could not be certified to the requested tolerance.
    #[error("certification failure: {what}: certified error {achieved:e} > tolerance {tol:e}")]
    Certification {
        what: String,
        achieved: f64,
        tol: f64,
    },
    /// Text input (model spec, coefficient list, CLI value) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
    /// Reading an input or writing an output failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Range(_) | Error::Precondition(_) | Error::Io(_) => 2,
            Error::Model(_) | Error::Parse(_) => 3,
            Error::Capacity { .. } => 4,
            Error::Certification { .. } => 5,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Range(_) => "range",
            Error::Precondition(_) => "precondition",
            Error::Model(_) => "model",
            Error::Capacity { .. } => "capacity",
            Error::Certification { .. } => "certification",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
