use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{Convention, Spectrum};

/// Shape of `phi` in the family `|a_k| = k^{-1/2} phi(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cor3Form {
    /// `phi(k)^2 = k^{-2 gamma}`
    Pow,
    /// `phi(k)^2 = log(k + 1)^{-2 gamma}`
    Log,
}

/// Serializable description of a coefficient model, as written in model-spec
/// files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelDescriptor {
    /// Explicit `(k, re, im)` amplitudes.
    Finite {
        terms: Vec<(u64, f64, f64)>,
    },
    /// `a_k = k^{-s}`, optionally zero beyond `cutoff`.
    PowerLaw {
        s: f64,
        cutoff: Option<u64>,
    },
    Cor3 {
        gamma: f64,
        form: Cor3Form,
    },
}

type AmplitudeFn = dyn Fn(u64) -> f64 + Send + Sync;
type TailFn = dyn Fn(u64, u64) -> (f64, f64) + Send + Sync;

/// A user rule: real amplitudes plus a certified bracket
/// `lo <= sum_{k > K} |a_{rk}|^2 <= hi` for every `(r, K)`.
#[derive(Clone)]
pub struct CustomRule {
    name: String,
    amplitude: Arc<AmplitudeFn>,
    tail: Arc<TailFn>,
}

impl CustomRule {
    pub fn new(
        name: impl Into<String>,
        amplitude: impl Fn(u64) -> f64 + Send + Sync + 'static,
        tail: impl Fn(u64, u64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            amplitude: Arc::new(amplitude),
            tail: Arc::new(tail),
        }
    }
}

impl fmt::Debug for CustomRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomRule")
            .field("name", &self.name)
            .finish()
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Finite(Spectrum),
    PowerLaw { exponent: f64 },
    Cor3Log { q: f64 },
    Custom(CustomRule),
}

/// Fourier coefficients `(a_k)_{k >= 1}` of a real, mean-zero function.
///
/// Only `k >= 1` is stored; `a_{-k}` is the conjugate of `a_k` and `a_0 = 0`.
/// Rule models carry a tail bracket so that infinite sums over the sequence
/// can be truncated with a certified error.
#[derive(Debug, Clone)]
pub struct CoeffModel {
    kind: Kind,
    descriptor: Option<ModelDescriptor>,
}

impl CoeffModel {
    /// A finite spectrum. The real-function convention is imposed.
    pub fn finite(spectrum: Spectrum) -> Result<Self> {
        if spectrum.convention() != Convention::Real {
            return Err(Error::Model(
                "coefficient models use the real-function convention".into(),
            ));
        }
        let terms = spectrum.iter().map(|(k, a)| (k, a.re, a.im)).collect();
        Ok(Self {
            kind: Kind::Finite(spectrum),
            descriptor: Some(ModelDescriptor::Finite { terms }),
        })
    }

    /// Convenience constructor from `(k, amplitude)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (u64, Complex64)>>(terms: I) -> Result<Self> {
        Self::finite(Spectrum::from_pairs(Convention::Real, terms)?)
    }

    /// `a_k = k^{-s}` for all `k`, or only `k <= cutoff`.
    pub fn power_law(s: f64, cutoff: Option<u64>) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::Model("power-law exponent must be finite".into()));
        }
        let descriptor = Some(ModelDescriptor::PowerLaw { s, cutoff });
        match cutoff {
            Some(n) => {
                let spec = Spectrum::from_pairs(
                    Convention::Real,
                    (1..=n).map(|k| (k, Complex64::new((k as f64).powf(-s), 0.0))),
                )?;
                Ok(Self {
                    kind: Kind::Finite(spec),
                    descriptor,
                })
            }
            None => {
                if s <= 0.5 {
                    return Err(Error::Model(format!(
                        "a_k = k^-{s} is not square-summable (needs s > 1/2)"
                    )));
                }
                Ok(Self {
                    kind: Kind::PowerLaw { exponent: s },
                    descriptor,
                })
            }
        }
    }

    /// `|a_k| = k^{-1/2} phi(k)` with `phi` from [`Cor3Form`].
    pub fn cor3(gamma: f64, form: Cor3Form) -> Result<Self> {
        let descriptor = Some(ModelDescriptor::Cor3 { gamma, form });
        let kind = match form {
            Cor3Form::Pow if gamma > 0.0 && gamma.is_finite() => Kind::PowerLaw {
                exponent: 0.5 + gamma,
            },
            Cor3Form::Log if gamma > 0.5 && gamma.is_finite() => Kind::Cor3Log { q: 2.0 * gamma },
            _ => {
                return Err(Error::Model(format!(
                    "cor3 {form:?} with gamma = {gamma} is not square-summable"
                )))
            }
        };
        Ok(Self { kind, descriptor })
    }

    /// A custom rule. The bracket at `r = 1, K = 0` must be finite.
    pub fn custom(rule: CustomRule) -> Result<Self> {
        let (lo, hi) = (rule.tail)(1, 0);
        if !hi.is_finite() || !lo.is_finite() || lo > hi || lo < 0.0 {
            return Err(Error::Model(format!(
                "rule `{}` has no finite square-sum certificate",
                rule.name
            )));
        }
        Ok(Self {
            kind: Kind::Custom(rule),
            descriptor: None,
        })
    }

    pub fn from_descriptor(d: &ModelDescriptor) -> Result<Self> {
        match d {
            ModelDescriptor::Finite { terms } => {
                Self::from_terms(terms.iter().map(|&(k, re, im)| (k, Complex64::new(re, im))))
            }
            ModelDescriptor::PowerLaw { s, cutoff } => Self::power_law(*s, *cutoff),
            ModelDescriptor::Cor3 { gamma, form } => Self::cor3(*gamma, *form),
        }
    }

    pub fn descriptor(&self) -> Option<&ModelDescriptor> {
        self.descriptor.as_ref()
    }

    /// The finite spectrum, when the model has finite support.
    pub fn spectrum(&self) -> Option<&Spectrum> {
        match &self.kind {
            Kind::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Finite(_))
    }

    /// Largest index with a nonzero amplitude, for finite models.
    pub fn support_bound(&self) -> Option<u64> {
        self.spectrum().map(Spectrum::max_frequency)
    }

    /// `p` when `|a_k|^2 = k^{-p}` for every `k`, so that `g(r) = r^{-p} g(1)`.
    pub(crate) fn pure_power(&self) -> Option<f64> {
        match self.kind {
            Kind::PowerLaw { exponent } => Some(2.0 * exponent),
            _ => None,
        }
    }

    pub fn amplitude(&self, k: u64) -> Complex64 {
        if k == 0 {
            return Complex64::default();
        }
        match &self.kind {
            Kind::Finite(s) => s.get(k),
            Kind::PowerLaw { exponent } => Complex64::new((k as f64).powf(-exponent), 0.0),
            Kind::Cor3Log { q } => {
                let kf = k as f64;
                Complex64::new((kf.recip() * (kf + 1.0).ln().powf(-q)).sqrt(), 0.0)
            }
            Kind::Custom(rule) => Complex64::new((rule.amplitude)(k), 0.0),
        }
    }

    pub fn abs_sq(&self, k: u64) -> f64 {
        match &self.kind {
            Kind::PowerLaw { exponent } if k > 0 => (k as f64).powf(-2.0 * exponent),
            Kind::Cor3Log { q } if k > 0 => {
                let kf = k as f64;
                kf.recip() * (kf + 1.0).ln().powf(-q)
            }
            _ => self.amplitude(k).norm_sqr(),
        }
    }

    /// Bracket `(lo, hi)` on `sum_{k > K} |a_{rk}|^2`.
    pub fn tail_bracket(&self, r: u64, k_cut: u64) -> (f64, f64) {
        assert!(r >= 1, "tail bracket needs r >= 1");
        match &self.kind {
            Kind::Finite(s) => {
                let v: f64 = s
                    .iter()
                    .filter(|&(k, _)| k % r == 0 && k / r > k_cut)
                    .map(|(_, a)| a.norm_sqr())
                    .sum();
                (v, v)
            }
            Kind::PowerLaw { exponent } => {
                let p = 2.0 * exponent;
                let scale = (r as f64).powf(-p);
                let (lo, hi) = power_tail(p, k_cut);
                (scale * lo, scale * hi)
            }
            Kind::Cor3Log { q } => {
                // Terms below the point where the integral bracket applies are
                // added exactly.
                let mut head = 0.0;
                let mut k = k_cut;
                while k == 0 || r * k < 2 {
                    k += 1;
                    head += self.abs_sq(r * k);
                }
                let (lo, hi) = log_tail(*q, r, k);
                (head + lo, head + hi)
            }
            Kind::Custom(rule) => (rule.tail)(r, k_cut),
        }
    }

    /// Finite spectrum of the first `k_max` coefficients together with the
    /// upper bound on the discarded square mass `sum_{k > k_max} |a_k|^2`.
    pub fn truncate(&self, k_max: u64) -> Result<(Spectrum, f64)> {
        if let Kind::Finite(s) = &self.kind {
            let kept =
                Spectrum::from_pairs(Convention::Real, s.iter().filter(|&(k, _)| k <= k_max))?;
            let (_, hi) = self.tail_bracket(1, k_max);
            return Ok((kept, hi));
        }
        let spec = Spectrum::from_pairs(
            Convention::Real,
            (1..=k_max).map(|k| (k, self.amplitude(k))),
        )?;
        Ok((spec, self.tail_bracket(1, k_max).1))
    }
}

/// Bracket on `sum_{k > K} k^{-p}` for `p > 1`.
///
/// Euler-Maclaurin through the `f'` term gives the upper end; `k^{-p}` is
/// completely monotone, so the first omitted term (the `f'''` one) bounds
/// the remainder and gives the lower end. The width is `O(K^{-p-3})`.
pub(crate) fn power_tail(p: f64, k_cut: u64) -> (f64, f64) {
    if k_cut == 0 {
        let (lo, hi) = power_tail(p, 1);
        return (1.0 + lo, 1.0 + hi);
    }
    let k = k_cut as f64;
    let fk = k.powf(-p);
    let hi = k * fk / (p - 1.0) - 0.5 * fk + p * fk / (12.0 * k);
    let lo = hi - p * (p + 1.0) * (p + 2.0) * fk / (720.0 * k * k * k);
    (lo, hi)
}

/// Bracket on `sum_{k > K} (rk)^{-1} log(rk + 1)^{-q}` for `q > 1`, `rK >= 2`.
///
/// Upper: drop the `+1` inside the log and integrate from `K`.
/// Lower: integrate from `K + 1` and bound `1/y` below by `1/(y + 1)`.
pub(crate) fn log_tail(q: f64, r: u64, k_cut: u64) -> (f64, f64) {
    let rf = r as f64;
    let kf = k_cut as f64;
    let hi = (rf * kf).ln().powf(1.0 - q) / ((q - 1.0) * rf);
    let lo = (rf * (kf + 1.0) + 1.0).ln().powf(1.0 - q) / ((q - 1.0) * rf);
    (lo, hi)
}

/// Coefficient sequences `(c_k)` of a dilated series `sum c_k f(kx)`.
#[derive(Clone)]
pub enum SeriesCoefficients {
    /// `c_1, c_2, ...`; zero past the end of the list.
    List(Vec<f64>),
    /// `c_k = 1/k`.
    Reciprocal,
    /// `c_k = k^{-p} log(k + 1)^{-q}`.
    Rule {
        p: f64,
        q: f64,
    },
    Custom(Arc<dyn Fn(u64) -> f64 + Send + Sync>),
}

impl fmt::Debug for SeriesCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::List(v) => f.debug_tuple("List").field(v).finish(),
            Self::Reciprocal => write!(f, "Reciprocal"),
            Self::Rule { p, q } => f.debug_struct("Rule").field("p", p).field("q", q).finish(),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Serializable form of [`SeriesCoefficients`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoeffsDescriptor {
    Reciprocal,
    List { values: Vec<f64> },
    Rule { p: f64, q: f64 },
}

impl SeriesCoefficients {
    pub fn from_descriptor(d: &CoeffsDescriptor) -> Self {
        match d {
            CoeffsDescriptor::Reciprocal => Self::Reciprocal,
            CoeffsDescriptor::List { values } => Self::List(values.clone()),
            CoeffsDescriptor::Rule { p, q } => Self::Rule { p: *p, q: *q },
        }
    }

    pub fn get(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        match self {
            Self::List(v) => v.get(k as usize - 1).copied().unwrap_or(0.0),
            Self::Reciprocal => (k as f64).recip(),
            Self::Rule { p, q } => {
                let kf = k as f64;
                kf.powf(-p) * (kf + 1.0).ln().powf(-q)
            }
            Self::Custom(f) => f(k),
        }
    }

    /// Index past which every coefficient vanishes, when known.
    pub fn support_bound(&self) -> Option<u64> {
        match self {
            Self::List(v) => Some(v.len() as u64),
            _ => None,
        }
    }
}
