use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::CoeffModel;
use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Default absolute tolerance for truncated infinite sums.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest truncation index tried before a sum is declared uncertifiable.
pub const MAX_TERMS: u64 = 1 << 26;

/// A value together with a certified bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certified {
    pub value: f64,
    pub error: f64,
}

/// `g(r) = sum_{k >= 1} |a_{rk}|^2`.
///
/// Finite models are summed directly and carry a zero error; rule models
/// are summed up to an adaptive cut and the tail is closed with the model's
/// bracket.
pub fn compute_g(model: &CoeffModel, r: u64, tol: f64) -> Result<Certified> {
    if r == 0 {
        return Err(Error::Domain("g(r) needs r >= 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if let Some(spec) = model.spectrum() {
        let value = spec
            .iter()
            .filter(|&(k, _)| k % r == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        return Ok(Certified { value, error: 0.0 });
    }
    if let Some(p) = model.pure_power() {
        if r > 1 {
            let base = summed_g(model, 1, tol)?;
            return Ok(scale_power(base, r, p));
        }
    }
    summed_g(model, r, tol)
}

pub(crate) fn scale_power(base: Certified, r: u64, p: f64) -> Certified {
    let s = (r as f64).powf(-p);
    let value = base.value * s;
    Certified {
        value,
        error: base.error * s + 4.0 * f64::EPSILON * value,
    }
}

fn summed_g(model: &CoeffModel, r: u64, tol: f64) -> Result<Certified> {
    let mut acc = CompensatedSum::new();
    let mut done = 0u64;
    let mut cut = 64u64;
    loop {
        for k in done + 1..=cut {
            acc.add(model.abs_sq(r * k));
        }
        done = cut;
        let (lo, hi) = model.tail_bracket(r, cut);
        let half = 0.5 * (hi - lo);
        let error = half + acc.rounding_bound() + 4.0 * f64::EPSILON * hi;
        if error <= tol {
            return Ok(Certified {
                value: acc.value() + 0.5 * (lo + hi),
                error,
            });
        }
        if cut >= MAX_TERMS {
            return Err(Error::Certification {
                what: format!("g({r})"),
                achieved: error,
                tol,
            });
        }
        cut = (cut * 2).min(MAX_TERMS);
    }
}

/// `g`, `G` and `h` tabulated over `[1, N]` (`g` over `[1, 2N]`).
///
/// * `G(r) = sum_{j <= 2r} g(j)`
/// * `h(n) = sum_{d | n} (d g(d) + G(d))`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylTable {
    n: usize,
    g: Vec<f64>,
    g_err: Vec<f64>,
    big_g: Vec<f64>,
    big_g_err: Vec<f64>,
    h: Vec<f64>,
    h_err: Vec<f64>,
}

/// Builds the table. `h` is assembled with a divisor sieve over the
/// precomputed `d g(d) + G(d)` terms.
pub fn build_weyl_table(model: &CoeffModel, n: usize, tol: f64) -> Result<WeylTable> {
    if n == 0 {
        return Err(Error::Domain("Weyl table needs N >= 1".into()));
    }
    let gs: Vec<Certified> = match model.pure_power() {
        Some(p) => {
            let base = compute_g(model, 1, tol)?;
            (1..=2 * n as u64)
                .map(|r| {
                    if r == 1 {
                        base
                    } else {
                        scale_power(base, r, p)
                    }
                })
                .collect()
        }
        None => (1..=2 * n as u64)
            .into_par_iter()
            .map(|r| compute_g(model, r, tol))
            .collect::<Result<_>>()?,
    };
    let mut g = vec![0.0; 2 * n + 1];
    let mut g_err = vec![0.0; 2 * n + 1];
    for (i, c) in gs.into_iter().enumerate() {
        g[i + 1] = c.value;
        g_err[i + 1] = c.error;
    }
    let mut big_g = vec![0.0; n + 1];
    let mut big_g_err = vec![0.0; n + 1];
    let (mut run, mut run_err) = (0.0, 0.0);
    for r in 1..=n {
        run += g[2 * r - 1];
        run += g[2 * r];
        run_err += g_err[2 * r - 1] + g_err[2 * r];
        big_g[r] = run;
        big_g_err[r] = run_err;
    }
    let mut h = vec![0.0; n + 1];
    let mut h_err = vec![0.0; n + 1];
    for d in 1..=n {
        let term = d as f64 * g[d] + big_g[d];
        let term_err = d as f64 * g_err[d] + big_g_err[d];
        for m in (d..=n).step_by(d) {
            h[m] += term;
            h_err[m] += term_err;
        }
    }
    Ok(WeylTable {
        n,
        g,
        g_err,
        big_g,
        big_g_err,
        h,
        h_err,
    })
}

impl WeylTable {
    /// The range bound `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `g(r)` for `1 <= r <= 2N`.
    pub fn g(&self, r: usize) -> f64 {
        self.g[r]
    }

    pub fn g_error(&self, r: usize) -> f64 {
        self.g_err[r]
    }

    /// `G(r)` for `1 <= r <= N`.
    pub fn big_g(&self, r: usize) -> f64 {
        self.big_g[r]
    }

    pub fn big_g_error(&self, r: usize) -> f64 {
        self.big_g_err[r]
    }

    /// `h(n)` for `1 <= n <= N`.
    pub fn h(&self, n: usize) -> f64 {
        self.h[n]
    }

    pub fn h_error(&self, n: usize) -> f64 {
        self.h_err[n]
    }

    /// Checked lookup of `h(n)`.
    pub fn try_h(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.n {
            return Err(Error::Range(format!(
                "h({n}) outside Weyl table coverage 1..={}",
                self.n
            )));
        }
        Ok(self.h[n])
    }

    /// `h(n)` reassembled from the stored `g`, `G` by enumerating the
    /// divisors of `n`. Agrees bit for bit with the sieve path.
    pub fn h_by_enumeration(&self, n: usize) -> Result<f64> {
        self.try_h(n)?;
        let mut acc = 0.0;
        for d in divisors(n as u64)? {
            let d = d as usize;
            acc += d as f64 * self.g[d] + self.big_g[d];
        }
        Ok(acc)
    }

    /// Monotone majorant `max_{k <= n} h(k)`.
    pub fn h_hat(&self, n: usize) -> f64 {
        self.h[1..=n.min(self.n)]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }
}
