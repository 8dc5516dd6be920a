//! Convergence-criterion sums and the checkable regularity conditions on the
//! Fourier coefficients. Every verdict here is a finite-range diagnostic.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::model::CoeffModel;
use super::weyl::{compute_g, WeylTable};
use super::SeriesCoefficients;
use crate::arith::{
    divisors, sieve_divisor_function_with, sigma_minus1_f64, DivisorKind, Exponent, SieveConfig,
};
use crate::error::{Error, Result};
use crate::numeric::{dyadic_checkpoints, least_squares_slope, CompensatedSum};

/// A partial sum recorded at index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub k: u64,
    pub partial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSum {
    pub total: f64,
    /// Partial sums at `1, 2, 4, ...` and at the truncation point.
    pub checkpoints: Vec<Checkpoint>,
}

fn checkpointed(k_max: u64, term: impl Fn(u64) -> f64) -> CriterionSum {
    let marks = dyadic_checkpoints(k_max);
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut next = marks.iter().peekable();
    let mut acc = 0.0;
    for k in 1..=k_max {
        acc += term(k);
        if next.peek() == Some(&&k) {
            next.next();
            checkpoints.push(Checkpoint { k, partial: acc });
        }
    }
    CriterionSum {
        total: acc,
        checkpoints,
    }
}

/// `log log k`, clamped to zero where it is not positive (`k < 16`).
pub fn loglog_weight(k: u64) -> f64 {
    if k < 16 {
        0.0
    } else {
        (k as f64).ln().ln()
    }
}

/// Weight sequences for Koksma-type sums `sum |a_k|^2 w(k)`.
#[derive(Clone)]
pub enum KoksmaWeight {
    SigmaMinus1,
    /// `sigma_{-1}(k)^{1 - eps}`
    SigmaMinus1Pow {
        eps: f64,
    },
    LogLog,
    Custom(Arc<dyn Fn(u64) -> f64 + Send + Sync>),
}

impl fmt::Debug for KoksmaWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SigmaMinus1 => write!(f, "SigmaMinus1"),
            Self::SigmaMinus1Pow { eps } => write!(f, "SigmaMinus1Pow({eps})"),
            Self::LogLog => write!(f, "LogLog"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// `sum_{k <= K} |a_k|^2 w(k)` with dyadic checkpoints.
pub fn koksma_sum(model: &CoeffModel, weight: &KoksmaWeight, k_max: u64) -> Result<CriterionSum> {
    if k_max == 0 {
        return Err(Error::Domain("Koksma sum needs K >= 1".into()));
    }
    let sigma = match weight {
        KoksmaWeight::SigmaMinus1 | KoksmaWeight::SigmaMinus1Pow { .. } => {
            Some(sieve_divisor_function_with(
                k_max as usize,
                DivisorKind::Sigma(Exponent::integer(-1)),
                SieveConfig { exact_limit: 0 },
            )?)
        }
        _ => None,
    };
    let w = |k: u64| -> f64 {
        match weight {
            KoksmaWeight::SigmaMinus1 => sigma.as_ref().expect("table").get(k as usize),
            KoksmaWeight::SigmaMinus1Pow { eps } => sigma
                .as_ref()
                .expect("table")
                .get(k as usize)
                .powf(1.0 - eps),
            KoksmaWeight::LogLog => loglog_weight(k),
            KoksmaWeight::Custom(f) => f(k),
        }
    };
    Ok(checkpointed(k_max, |k| {
        let a = model.abs_sq(k);
        if a == 0.0 {
            0.0
        } else {
            a * w(k)
        }
    }))
}

/// `sum_{2 <= k <= K} c_k^2 h(k) (log k)^power`; the `k = 1` term is dropped.
///
/// `power = 2` gives the sufficient condition, a negative power the
/// necessity-side diagnostic.
pub fn theorem2_condition_sum(
    table: &WeylTable,
    coeffs: &SeriesCoefficients,
    k_max: u64,
    power: f64,
) -> Result<CriterionSum> {
    if k_max as usize > table.n() {
        return Err(Error::Range(format!(
            "Weyl table covers 1..={} but K = {k_max}",
            table.n()
        )));
    }
    Ok(checkpointed(k_max, |k| {
        if k < 2 {
            return 0.0;
        }
        let c = coeffs.get(k);
        c * c * table.h(k as usize) * (k as f64).ln().powf(power)
    }))
}

/// Non-increasing `phi` defining `psi(r) = sum_{k >= r} phi(k)^2 / k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiDescriptor {
    /// `phi(k)^2 = k^{-2 gamma}`
    Power { gamma: f64 },
    /// `phi(k)^2 = log(k + 1)^{-2 gamma}`
    Log { gamma: f64 },
    /// `phi(1), phi(2), ...`, zero afterwards.
    Finite { values: Vec<f64> },
}

impl PhiDescriptor {
    fn phi_sq(&self, k: u64) -> f64 {
        let kf = k as f64;
        match self {
            Self::Power { gamma } => kf.powf(-2.0 * gamma),
            Self::Log { gamma } => (kf + 1.0).ln().powf(-2.0 * gamma),
            Self::Finite { values } => values.get(k as usize - 1).map_or(0.0, |v| v * v),
        }
    }

    /// Bracket on `sum_{k > K} phi(k)^2 / k`, `K >= 2`.
    fn tail(&self, k_cut: u64) -> (f64, f64) {
        match self {
            Self::Power { gamma } => super::model::power_tail(1.0 + 2.0 * gamma, k_cut),
            Self::Log { gamma } => super::model::log_tail(2.0 * gamma, 1, k_cut),
            Self::Finite { .. } => (0.0, 0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Power { gamma } if *gamma > 0.0 && gamma.is_finite() => Ok(()),
            Self::Log { gamma } if *gamma > 0.5 && gamma.is_finite() => Ok(()),
            Self::Finite { values } => {
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::Model(
                        "phi values must be finite and non-negative".into(),
                    ));
                }
                if values.windows(2).any(|w| w[1] > w[0]) {
                    return Err(Error::Model("phi must be non-increasing".into()));
                }
                Ok(())
            }
            other => Err(Error::Model(format!(
                "sum phi(k)^2 / k diverges for {other:?}"
            ))),
        }
    }
}

/// Least-squares exponent estimate over the top decade of a table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularVariation {
    pub slope: f64,
    pub residual: f64,
    pub window: (u64, u64),
}

/// Slope of `log y(x)` against `log x` over `x` in `[max(1, N/10), N]`.
pub fn regular_variation_estimate(n: u64, y: impl Fn(u64) -> f64) -> Option<RegularVariation> {
    let lo = (n / 10).max(1);
    let mut pts = Vec::new();
    for x in lo..=n {
        let v = y(x);
        if !(v > 0.0) {
            return None;
        }
        pts.push(((x as f64).ln(), v.ln()));
    }
    let (slope, residual) = least_squares_slope(&pts)?;
    Some(RegularVariation {
        slope,
        residual,
        window: (lo, n),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiTable {
    /// `psi(r)` for `r = 1..=N` (slot 0 unused).
    pub psi: Vec<f64>,
    /// Certified absolute error shared by every `psi(r)`.
    pub psi_error: f64,
    /// `h(n) = sum_{d | n} psi(d)` for `n = 1..=N`.
    pub h: Vec<f64>,
    pub exponent: Option<RegularVariation>,
    /// Set when the estimated exponent is below `-1`.
    pub exponent_below_minus_one: bool,
}

/// `psi(r) = sum_{k >= r} phi(k)^2 / k` and `h(n) = sum_{d | n} psi(d)`.
pub fn compute_psi_h(phi: &PhiDescriptor, n: usize, tol: f64) -> Result<PsiTable> {
    phi.validate()?;
    if n == 0 {
        return Err(Error::Domain("psi table needs N >= 1".into()));
    }
    // psi(N) by direct summation plus a bracketed tail; the rest by the
    // backward recursion psi(r) = psi(r + 1) + phi(r)^2 / r.
    let start = n as u64;
    let mut acc = CompensatedSum::new();
    let mut done = start - 1;
    let mut cut = (2 * start).max(64);
    let (psi_n, psi_error) = loop {
        for k in done + 1..=cut {
            acc.add(phi.phi_sq(k) / k as f64);
        }
        done = cut;
        let (lo, hi) = phi.tail(cut);
        let err = 0.5 * (hi - lo) + acc.rounding_bound() + 4.0 * f64::EPSILON * hi;
        if err <= tol {
            break (acc.value() + 0.5 * (lo + hi), err);
        }
        if cut >= super::weyl::MAX_TERMS {
            return Err(Error::Certification {
                what: format!("psi({n})"),
                achieved: err,
                tol,
            });
        }
        cut = (cut * 2).min(super::weyl::MAX_TERMS);
    };
    let mut psi = vec![0.0; n + 1];
    psi[n] = psi_n;
    for r in (1..n).rev() {
        psi[r] = psi[r + 1] + phi.phi_sq(r as u64) / r as f64;
    }
    let mut h = vec![0.0; n + 1];
    for d in 1..=n {
        for m in (d..=n).step_by(d) {
            h[m] += psi[d];
        }
    }
    let exponent = regular_variation_estimate(n as u64, |r| psi[r as usize]);
    Ok(PsiTable {
        exponent_below_minus_one: exponent.is_some_and(|e| e.slope < -1.0),
        psi,
        psi_error,
        h,
        exponent,
    })
}

/// The weights `epsilon_d` of the modified divisor sum.
#[derive(Clone)]
pub enum EpsRule {
    /// `epsilon_d = 1`
    One,
    /// `epsilon_1 = 1`, `epsilon_d = (log d)^{-delta}` for `d >= 2`.
    LogPower {
        delta: f64,
    },
    Custom(Arc<dyn Fn(u64) -> f64 + Send + Sync>),
}

impl fmt::Debug for EpsRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::One => write!(f, "One"),
            Self::LogPower { delta } => write!(f, "LogPower({delta})"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl EpsRule {
    pub fn eps(&self, d: u64) -> f64 {
        match self {
            Self::One => 1.0,
            Self::LogPower { delta } => {
                if d < 2 || *delta == 0.0 {
                    1.0
                } else {
                    (d as f64).ln().powf(-delta)
                }
            }
            Self::Custom(f) => f(d),
        }
    }

    fn is_one(&self) -> bool {
        matches!(self, Self::One) || matches!(self, Self::LogPower { delta } if *delta == 0.0)
    }
}

/// `sigma~(k) = sum_{d | k} epsilon_d / d`.
///
/// With `epsilon = 1` this is `sigma_1(k) / k` evaluated as one correctly
/// rounded division, so it coincides with the exact `sigma_{-1}(k)`.
pub fn sigma_tilde(k: u64, eps: &EpsRule) -> Result<f64> {
    let divs = divisors(k)?;
    if eps.is_one() {
        let s: u128 = divs.iter().map(|&d| d as u128).sum();
        return Ok(s as f64 / k as f64);
    }
    Ok(divs.iter().map(|&d| eps.eps(d) / d as f64).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NecessityCheck {
    pub k: u64,
    pub delta: f64,
    pub sigma_tilde: f64,
    pub sigma_minus1: f64,
    /// `1 + sigma_{-1}(k)^delta + sigma_{-1}(k)^{1 - delta^2}`
    pub bound: f64,
    pub pass: bool,
}

/// Checks `sigma~(k) <= 1 + sigma_{-1}(k)^delta + sigma_{-1}(k)^{1 - delta^2}`
/// for `epsilon_d = (log d)^{-delta}`.
///
/// The constants come from splitting the divisors at
/// `X = exp(sigma_{-1}(k)^delta)` and using `sum_{d <= X} 1/d <= 1 + log X`.
pub fn necessity_bound_check(k: u64, delta: f64) -> Result<NecessityCheck> {
    if k < 2 {
        return Err(Error::Domain(format!(
            "necessity check needs k >= 2, got {k}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let st = sigma_tilde(k, &EpsRule::LogPower { delta })?;
    let s = sigma_minus1_f64(k)?;
    let bound = 1.0 + s.powf(delta) + s.powf(1.0 - delta * delta);
    Ok(NecessityCheck {
        k,
        delta,
        sigma_tilde: st,
        sigma_minus1: s,
        bound,
        pass: st <= bound,
    })
}

/// The three checkable regularity conditions on `(a_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Cor1Condition {
    /// `|a_k|` regularly varying; slope fit with residual below `threshold`.
    RegularVariation { threshold: f64 },
    /// `k^{-gamma} |a_k|` non-increasing.
    Monotone { gamma: f64 },
    /// `sum_k |a_{dk}|^2 <= C / d` for all `d`.
    UniformDilation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cor1Verdict {
    pub condition: Cor1Condition,
    pub range: u64,
    pub pass: bool,
    /// For the dilation condition: `max_{d <= range} d g(d)`.
    pub constant: Option<f64>,
    /// Maximising `d`, or the first index where monotonicity fails.
    pub witness: Option<u64>,
    pub slope: Option<f64>,
    pub residual: Option<f64>,
}

/// Finite-range check of one regularity condition.
///
/// The dilation condition passes when `d g(d)` attains its maximum in the
/// lower half of the range, i.e. the supremum has visibly stabilised.
pub fn corollary1_condition_check(
    model: &CoeffModel,
    condition: Cor1Condition,
    range: u64,
    tol: f64,
) -> Result<Cor1Verdict> {
    if range == 0 {
        return Err(Error::Domain("condition check needs a range >= 1".into()));
    }
    let mut v = Cor1Verdict {
        condition,
        range,
        pass: false,
        constant: None,
        witness: None,
        slope: None,
        residual: None,
    };
    match condition {
        Cor1Condition::UniformDilation => {
            let mut best = (0.0f64, 1u64);
            for d in 1..=range {
                let g = compute_g(model, d, tol)?;
                let val = d as f64 * (g.value + g.error);
                if val > best.0 {
                    best = (val, d);
                }
            }
            v.constant = Some(best.0);
            v.witness = Some(best.1);
            v.pass = best.0.is_finite() && (range < 2 || best.1 <= range / 2);
        }
        Cor1Condition::Monotone { gamma } => {
            if !(gamma > 0.0) {
                return Err(Error::Domain(format!(
                    "gamma must be positive, got {gamma}"
                )));
            }
            let mut prev = f64::INFINITY;
            v.pass = true;
            for k in 1..=range {
                let cur = (k as f64).powf(-gamma) * model.amplitude(k).norm();
                if cur > prev * (1.0 + 1e-12) {
                    v.pass = false;
                    v.witness = Some(k);
                    break;
                }
                prev = cur;
            }
        }
        Cor1Condition::RegularVariation { threshold } => {
            let lo = (range / 10).max(1);
            if let Some(k) = (lo..=range).find(|&k| model.abs_sq(k) == 0.0) {
                v.witness = Some(k);
            } else if let Some(est) =
                regular_variation_estimate(range, |k| model.amplitude(k).norm())
            {
                v.slope = Some(est.slope);
                v.residual = Some(est.residual);
                v.pass = est.residual < threshold;
            }
        }
    }
    Ok(v)
}
