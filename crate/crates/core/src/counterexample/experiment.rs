use serde::{Deserialize, Serialize};

use super::gaussian::{gaussian_norm_expectation, MonteCarloConfig};
use super::orbit::{build_ft, entropy_number, orbit_distances};
use super::weights::{WeightDescriptor, WeightFamily};
use crate::arith::{enumerate_smooth_block, find_doubling_t};
use crate::coeff::loglog_weight;
use crate::error::{Error, Result};
use crate::spectrum::DEFAULT_FREQ_CAP;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub s: usize,
    pub d: u32,
    pub t_max: u32,
    /// Radii for the covering numbers; `1/8` is always included.
    pub eps_list: Vec<f64>,
    /// Randomization length and Cesaro range.
    pub j: u64,
    pub monte_carlo: Option<MonteCarloConfig>,
    pub freq_cap: u64,
}

impl ExperimentConfig {
    pub fn new(s: usize, d: u32, t_max: u32) -> Self {
        Self {
            s,
            d,
            t_max,
            eps_list: vec![0.125],
            j: 64,
            monte_carlo: None,
            freq_cap: DEFAULT_FREQ_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cardinalities {
    pub count_t: usize,
    pub count_t_plus_d: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyEntry {
    pub eps: f64,
    pub count: usize,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDiagnostics {
    /// `max_{m in A_T} w(m)`
    pub max_on_block: f64,
    /// `log log 2^{T+1}` (zero below 16).
    pub loglog_block_top: f64,
    /// `max_{m in A_T, m >= 16} w(m) / log log m`
    pub max_ratio_to_loglog: Option<f64>,
    /// `J^{-1} sum_{n <= J} w(n)`
    pub cesaro_mean: f64,
}

/// Numeric table for the smooth-block construction. Diagnostic only: the
/// tension between the two sides is asymptotic in `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Bundle {
    #[serde(rename = "T")]
    pub t: u32,
    pub cardinalities: Cardinalities,
    pub orbit_indices: Vec<u64>,
    pub orbit_distances: Vec<Vec<f64>>,
    pub entropy: Vec<EntropyEntry>,
    /// `sqrt(log T)`, absent for `T = 0`.
    pub sqrt_log_t: Option<f64>,
    pub exact_norm_expectation: f64,
    pub exact_norm_expectation_rational: Option<String>,
    pub mc_mean: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub mc_flagged: Option<bool>,
    pub weights: Option<WeightDescriptor>,
    pub weight_diagnostics: WeightDiagnostics,
}

pub fn theorem1_experiment(cfg: &ExperimentConfig, w: &WeightFamily) -> Result<Theorem1Bundle> {
    let wit = find_doubling_t(cfg.s, cfg.d, cfg.t_max)?.ok_or_else(|| {
        Error::Precondition(format!(
            "no T <= {} satisfies the doubling condition for s = {}, d = {}",
            cfg.t_max, cfg.s, cfg.d
        ))
    })?;
    let block = enumerate_smooth_block(cfg.s, wit.t)?;
    let f = build_ft(&block)?;
    let indices: Vec<u64> = (0..=cfg.d / 2).map(|i| 4u64.pow(i)).collect();
    let orbit = orbit_distances(&f, &indices, cfg.freq_cap)?;
    let mut radii = cfg.eps_list.clone();
    if !radii.contains(&0.125) {
        radii.push(0.125);
    }
    radii.sort_by(|a, b| a.total_cmp(b));
    radii.dedup();
    let entropy = radii
        .iter()
        .map(|&eps| {
            entropy_number(&orbit, eps).map(|e| EntropyEntry {
                eps,
                count: e.count,
                exact: e.exact,
            })
        })
        .collect::<Result<_>>()?;
    let mut max_on_block = 0.0f64;
    let mut max_ratio: Option<f64> = None;
    for &m in block.members() {
        let v = w.try_eval(m)?;
        max_on_block = max_on_block.max(v);
        if m >= 16 {
            let r = v / loglog_weight(m);
            max_ratio = Some(max_ratio.map_or(r, |x| x.max(r)));
        }
    }
    let mut cesaro = 0.0;
    for n in 1..=cfg.j {
        cesaro += w.try_eval(n)?;
    }
    let report = gaussian_norm_expectation(&block, cfg.j, w, cfg.monte_carlo)?;
    let mc = report.monte_carlo.as_ref();
    Ok(Theorem1Bundle {
        t: wit.t,
        cardinalities: Cardinalities {
            count_t: wit.count_t,
            count_t_plus_d: wit.count_t_plus_d,
        },
        orbit_indices: orbit.indices.clone(),
        orbit_distances: orbit.distances.clone(),
        entropy,
        sqrt_log_t: (wit.t >= 1).then(|| (wit.t as f64).ln().sqrt()),
        exact_norm_expectation: report.exact_expectation,
        exact_norm_expectation_rational: report.exact_rational.clone(),
        mc_mean: mc.map(|m| m.mean),
        mc_stderr: mc.map(|m| m.stderr),
        mc_flagged: mc.map(|m| m.flagged),
        weights: w.descriptor().cloned(),
        weight_diagnostics: WeightDiagnostics {
            max_on_block,
            loglog_block_top: loglog_weight(1u64 << (wit.t + 1)),
            max_ratio_to_loglog: max_ratio,
            cesaro_mean: cesaro / cfg.j as f64,
        },
    })
}
