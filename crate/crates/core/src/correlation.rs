//! Dilation correlations `lambda_{m,n} = |int f(mx) f(nx) dx|` and the
//! dyadic-block `L^2` bounds built from them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::gcd_reduce;
use crate::coeff::sigma_tilde;
use crate::coeff::{
    compute_g, scale_power, Certified, CoeffModel, EpsRule, SeriesCoefficients, WeylTable,
    MAX_TERMS,
};
use crate::error::{Error, Result};
use crate::numeric::{dyadic_checkpoints, CompensatedSum};
use crate::series::{quadrature_oracle, Quadrature};

/// Default relative slack for the block inequality.
pub const DEFAULT_LEMMA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureCheck {
    pub nodes: usize,
    pub value: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub m: u64,
    pub n: u64,
    pub d: u64,
    pub m_reduced: u64,
    pub n_reduced: u64,
    /// `int_0^1 f(mx) f(nx) dx`
    pub exact_value: f64,
    pub lambda: f64,
    /// `g(m') + g(n')`
    pub bound: f64,
    /// Certified error of `exact_value`.
    pub certified_error: f64,
    /// Certified error of `bound`.
    pub bound_error: f64,
    pub quadrature_check: Option<QuadratureCheck>,
}

/// `2 Re sum_{i >= 1} a_{m'i} conj(a_{n'i})`, with the error certificate.
fn reduced_correlation(
    model: &CoeffModel,
    mr: u64,
    nr: u64,
    tol: f64,
    g1: Option<Certified>,
) -> Result<(f64, f64)> {
    if let Some(spec) = model.spectrum() {
        let top = spec.max_frequency();
        let mut acc = 0.0;
        let mut i = 1;
        while mr.max(nr).saturating_mul(i) <= top {
            let a = spec.get(mr * i);
            let b = spec.get(nr * i);
            acc += a.re * b.re + a.im * b.im;
            i += 1;
        }
        return Ok((2.0 * acc, 0.0));
    }
    if let Some(p) = model.pure_power() {
        let g1 = match g1 {
            Some(g) => g,
            None => compute_g(model, 1, tol)?,
        };
        let s = ((mr as f64) * (nr as f64)).powf(-0.5 * p);
        let value = 2.0 * s * g1.value;
        return Ok((value, 2.0 * s * g1.error + 4.0 * f64::EPSILON * value));
    }
    // Cauchy-Schwarz on the tail: |sum_{i > I} a_{m'i} a_{n'i}|^2 <= tail(m') tail(n').
    let mut acc = CompensatedSum::new();
    let mut done = 0u64;
    let mut cut = 64u64;
    loop {
        for i in done + 1..=cut {
            let a = model.amplitude(mr * i);
            let b = model.amplitude(nr * i);
            acc.add(a.re * b.re + a.im * b.im);
        }
        done = cut;
        let tm = model.tail_bracket(mr, cut).1;
        let tn = model.tail_bracket(nr, cut).1;
        let err = 2.0 * ((tm * tn).sqrt() + acc.rounding_bound());
        if err <= tol {
            return Ok((2.0 * acc.value(), err));
        }
        if cut >= MAX_TERMS {
            return Err(Error::Certification {
                what: format!("correlation ({mr}, {nr})"),
                achieved: err,
                tol,
            });
        }
        cut = (cut * 2).min(MAX_TERMS);
    }
}

/// Exact correlation of `f(mx)` and `f(nx)` through the GCD reduction.
pub fn exact_correlation(
    model: &CoeffModel,
    m: u64,
    n: u64,
    tol: f64,
) -> Result<CorrelationReport> {
    correlation_with(model, m, n, tol, None)
}

/// `g1` is a precomputed `g(1)`, used only for pure-power models.
fn correlation_with(
    model: &CoeffModel,
    m: u64,
    n: u64,
    tol: f64,
    g1: Option<Certified>,
) -> Result<CorrelationReport> {
    let red = gcd_reduce(m, n)?;
    let (exact_value, certified_error) = reduced_correlation(model, red.m, red.n, tol, g1)?;
    let g = |r: u64| match (g1, model.pure_power()) {
        (Some(base), Some(p)) => Ok(scale_power(base, r, p)),
        _ => compute_g(model, r, tol),
    };
    let gm = g(red.m)?;
    let gn = g(red.n)?;
    Ok(CorrelationReport {
        m,
        n,
        d: red.d,
        m_reduced: red.m,
        n_reduced: red.n,
        exact_value,
        lambda: exact_value.abs(),
        bound: gm.value + gn.value,
        certified_error,
        bound_error: gm.error + gn.error,
        quadrature_check: None,
    })
}

/// Attaches a trapezoidal cross-check on `nodes` points to a report of a
/// finite model.
pub fn attach_quadrature(
    report: &mut CorrelationReport,
    model: &CoeffModel,
    nodes: usize,
) -> Result<()> {
    let spec = model
        .spectrum()
        .ok_or_else(|| Error::Model("quadrature check needs a finite model".into()))?;
    let value = quadrature_oracle(
        Quadrature::Pair {
            f: spec,
            m: report.m,
            n: report.n,
        },
        nodes,
    )?;
    report.quadrature_check = Some(QuadratureCheck {
        nodes,
        value,
        discrepancy: (value - report.exact_value).abs(),
    });
    Ok(())
}

fn check_block(i: u64, level: u32) -> Result<(u64, u64)> {
    if level >= 63 {
        return Err(Error::Range(format!("block level {level} too large")));
    }
    let lo = 1u64 << level;
    let hi = lo << 1;
    if i <= lo || i > hi {
        return Err(Error::Domain(format!(
            "{i} is outside the block ({lo}, {hi}]"
        )));
    }
    Ok((lo + 1, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoReport {
    pub i: u64,
    pub level: u32,
    /// `sum_{j in block} lambda_{i,j}`
    pub value: f64,
    pub certified_error: f64,
    /// `(j, lambda_{i,j})` across the block.
    pub lambdas: Vec<(u64, f64)>,
    /// `h(i)`
    pub h_bound: f64,
    /// `value / h(i)`
    pub ratio: f64,
}

/// Block row sum of `lambda_{i,j}` with `i` in `(2^k, 2^{k+1}]`.
pub fn rho(
    model: &CoeffModel,
    table: &WeylTable,
    i: u64,
    level: u32,
    tol: f64,
) -> Result<RhoReport> {
    let (lo, hi) = check_block(i, level)?;
    let h = table.try_h(i as usize)?;
    let reports: Vec<CorrelationReport> = (lo..=hi)
        .map(|j| exact_correlation(model, i, j, tol))
        .collect::<Result<_>>()?;
    let value = reports.iter().map(|r| r.lambda).sum();
    Ok(RhoReport {
        i,
        level,
        value,
        certified_error: reports.iter().map(|r| r.certified_error).sum(),
        lambdas: reports.iter().map(|r| (r.n, r.lambda)).collect(),
        h_bound: h,
        ratio: value / h,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockQuadraticForm {
    pub r: u32,
    /// `(l, c_l)` for `l` in `(2^r, 2^{r+1}]`.
    pub coefficients: Vec<(u64, f64)>,
    /// `int (sum c_l f(lx))^2 dx`
    pub exact_integral: f64,
    pub integral_error: f64,
    /// `sum c_l^2 h(l)`
    pub bound_rhs: f64,
    /// `(i, rho(i))` across the block.
    pub rho_values: Vec<(u64, f64)>,
    /// `exact_integral / bound_rhs`, absent when both vanish.
    pub ratio: Option<f64>,
    pub tolerance: f64,
    pub holds: bool,
}

/// The block inequality `int (sum c_l f(lx))^2 <= sum c_l^2 h(l)` on
/// `(2^r, 2^{r+1}]`. `coeffs[k]` is `c_{2^r + 1 + k}`.
///
/// Finite models use Parseval on the dilated spectrum; rule models sum the
/// correlation matrix.
pub fn verify_lemma_block(
    model: &CoeffModel,
    table: &WeylTable,
    r: u32,
    coeffs: &[f64],
    tol: f64,
) -> Result<BlockQuadraticForm> {
    if r >= 62 {
        return Err(Error::Range(format!("block level {r} too large")));
    }
    let lo = (1u64 << r) + 1;
    let hi = 1u64 << (r + 1);
    if coeffs.len() as u64 != hi - lo + 1 {
        return Err(Error::Precondition(format!(
            "block {r} needs {} coefficients, got {}",
            hi - lo + 1,
            coeffs.len()
        )));
    }
    if hi as usize > table.n() {
        return Err(Error::Range(format!(
            "Weyl table covers 1..={} but block {r} reaches {hi}",
            table.n()
        )));
    }
    let ls: Vec<u64> = (lo..=hi).collect();
    let pairs: Vec<(u64, f64)> = ls.iter().copied().zip(coeffs.iter().copied()).collect();
    let tol = tol.max(1e-300);
    let g1 = match model.pure_power() {
        Some(_) => Some(compute_g(model, 1, tol)?),
        None => None,
    };
    let corr: Vec<Vec<CorrelationReport>> = ls
        .par_iter()
        .map(|&i| {
            ls.iter()
                .map(|&j| correlation_with(model, i, j, tol, g1))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let rho_values = ls
        .iter()
        .zip(&corr)
        .map(|(&i, row)| (i, row.iter().map(|c| c.lambda).sum()))
        .collect();
    let (exact_integral, integral_error) = match model.spectrum() {
        Some(spec) => {
            let mut b = crate::spectrum::Spectrum::new(spec.convention());
            for &(l, c) in &pairs {
                if c != 0.0 {
                    b.add_scaled(&spec.dilate(l)?, c);
                }
            }
            (b.norm_sq(), 0.0)
        }
        None => {
            let mut acc = CompensatedSum::new();
            let mut err = 0.0;
            for (a, row) in corr.iter().enumerate() {
                for (b, rep) in row.iter().enumerate() {
                    let w = coeffs[a] * coeffs[b];
                    acc.add(w * rep.exact_value);
                    err += w.abs() * rep.certified_error;
                }
            }
            (acc.value(), err + acc.rounding_bound())
        }
    };
    let bound_rhs: f64 = pairs
        .iter()
        .map(|&(l, c)| c * c * table.h(l as usize))
        .sum();
    let ratio = (bound_rhs > 0.0).then(|| exact_integral / bound_rhs);
    Ok(BlockQuadraticForm {
        r,
        coefficients: pairs,
        exact_integral,
        integral_error,
        bound_rhs,
        rho_values,
        ratio,
        tolerance: DEFAULT_LEMMA_TOL,
        holds: exact_integral - integral_error <= bound_rhs * (1.0 + DEFAULT_LEMMA_TOL),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainLevel {
    pub r: u32,
    /// `sum_{j in (2^r, 2^{r+1}]} c_j^2 h(j)`
    pub block_bound: f64,
    /// `r^2` times the block bound.
    pub weighted: f64,
    pub running: f64,
    /// `(sum_{k=r}^R k^{-2}) (sum_{k=r}^R weighted_k)`, the squared `L^2`
    /// bound on the largest oscillation of block sums from level `r` on.
    /// Absent for `r = 0`.
    pub oscillation_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainBound {
    pub max_level: u32,
    pub levels: Vec<ChainLevel>,
    pub total: f64,
}

/// Dyadic chaining bound through level `R`; needs `h` up to `2^{R+1}`.
pub fn rademacher_menshov_bound(
    table: &WeylTable,
    coeffs: &SeriesCoefficients,
    max_level: u32,
) -> Result<ChainBound> {
    if max_level >= 62 {
        return Err(Error::Range(format!("level {max_level} too large")));
    }
    let top = 1usize << (max_level + 1);
    if top > table.n() {
        return Err(Error::Range(format!(
            "Weyl table covers 1..={} but level {max_level} reaches {top}",
            table.n()
        )));
    }
    let mut levels = Vec::new();
    let mut running = 0.0;
    for r in 0..=max_level {
        let lo = (1u64 << r) + 1;
        let hi = 1u64 << (r + 1);
        let block_bound: f64 = (lo..=hi)
            .map(|j| {
                let c = coeffs.get(j);
                c * c * table.h(j as usize)
            })
            .sum();
        let weighted = (r as f64).powi(2) * block_bound;
        running += weighted;
        levels.push(ChainLevel {
            r,
            block_bound,
            weighted,
            running,
            oscillation_bound: None,
        });
    }
    let mut inv_sq = 0.0;
    let mut tail = 0.0;
    for lvl in levels.iter_mut().rev() {
        if lvl.r == 0 {
            break;
        }
        inv_sq += (lvl.r as f64).powi(-2);
        tail += lvl.weighted;
        lvl.oscillation_bound = Some(inv_sq * tail);
    }
    Ok(ChainBound {
        max_level,
        total: running,
        levels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionPoint {
    pub k: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityReduction {
    pub delta: f64,
    /// Index through which the right-hand sum runs.
    pub rhs_terms: u64,
    pub points: Vec<ReductionPoint>,
}

/// Both sides of the necessity reduction with `c_k = 1/k`:
/// `sum_{k <= K} k^{-2} h(k) epsilon_k` against
/// `sum_{j <= J} |a_j|^2 sigma~(j)`, where `epsilon = (log k)^{-delta}`
/// (`epsilon_1 = 1`). `J` is the support of a finite model and `K`
/// otherwise. Both are sampled at dyadic checkpoints and at `K`.
pub fn necessity_reduction(
    model: &CoeffModel,
    table: &WeylTable,
    k_max: u64,
    delta: f64,
) -> Result<NecessityReduction> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!(
            "delta must lie in [0, 1), got {delta}"
        )));
    }
    if k_max == 0 || k_max as usize > table.n() {
        return Err(Error::Range(format!(
            "K = {k_max} outside Weyl table coverage 1..={}",
            table.n()
        )));
    }
    let eps = EpsRule::LogPower { delta };
    let rhs_terms = model.support_bound().unwrap_or(k_max).max(1);
    let mut rhs_partial = Vec::with_capacity(rhs_terms as usize + 1);
    rhs_partial.push(0.0);
    let mut acc = 0.0;
    for j in 1..=rhs_terms {
        let a = model.abs_sq(j);
        if a != 0.0 {
            acc += a * sigma_tilde(j, &eps)?;
        }
        rhs_partial.push(acc);
    }
    let marks = dyadic_checkpoints(k_max);
    let mut points = Vec::with_capacity(marks.len());
    let mut lhs = 0.0;
    let mut next = marks.iter().peekable();
    for k in 1..=k_max {
        lhs += table.h(k as usize) * eps.eps(k) / (k as f64 * k as f64);
        if next.peek() == Some(&&k) {
            next.next();
            let rhs = rhs_partial[k.min(rhs_terms) as usize];
            points.push(ReductionPoint {
                k,
                lhs,
                rhs,
                ratio: lhs / rhs,
            });
        }
    }
    Ok(NecessityReduction {
        delta,
        rhs_terms,
        points,
    })
}
