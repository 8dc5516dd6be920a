//! Numerical laboratory for dilated series `sum c_k f(kx)`.
//!
//! * [`arith`]: divisor functions, GCD reduction, smooth-number blocks.
//! * [`coeff`]: coefficient models and the Weyl functionals `g`, `G`, `h`.
//! * [`correlation`]: dilation correlations and dyadic-block `L^2` bounds.
//! * [`counterexample`]: smooth-set functions, averaging operators, entropy
//!   numbers and Gaussian randomization.
//! * [`series`]: partial-sum spectra, grid evaluation and quadrature.
//! * [`cli`]: the `dilate-lab` command line.

pub mod arith;
pub mod cli;
pub mod coeff;
pub mod correlation;
pub mod counterexample;
pub mod error;
pub mod numeric;
pub mod series;
pub mod spectrum;

pub use error::{Error, Result};
