use std::collections::HashMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::weights::{WeightDescriptor, WeightFamily};
use crate::arith::SmoothSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub samples: u64,
    pub seed: u64,
    /// Draw `i` uses ChaCha8 seeded with `seed` on stream `i`.
    pub generator: String,
    pub mean: f64,
    pub stderr: f64,
    /// `(mean - exact) / stderr`
    pub z_score: f64,
    /// Set when the mean is more than four standard errors from the exact value.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNormReport {
    pub j: u64,
    pub t: u32,
    pub cardinality: usize,
    pub weights: Option<WeightDescriptor>,
    /// `E ||F_{J,f_T}||_w^2 = (J #A)^{-1} sum_{j <= J} sum_{m in A} w(mj)`
    pub exact_expectation: f64,
    /// The same value as a reduced fraction, for rational weights.
    pub exact_rational: Option<String>,
    pub monte_carlo: Option<MonteCarlo>,
}

/// Exact weighted-norm expectation of `F_{J,f} = J^{-1/2} sum_j g_j f_T(j .)`
/// and an optional seeded Monte Carlo estimate of it.
pub fn gaussian_norm_expectation(
    block: &SmoothSet,
    j_max: u64,
    w: &WeightFamily,
    mc: Option<MonteCarloConfig>,
) -> Result<GaussianNormReport> {
    if j_max == 0 {
        return Err(Error::Domain("randomization length J must be >= 1".into()));
    }
    if block.is_empty() {
        return Err(Error::Domain("empty smooth block".into()));
    }
    let card = block.len() as u64;
    let denom = (j_max * card) as f64;
    let (float_sum, exact_sum) = w.double_sum(block.members(), j_max)?;
    let exact_ratio =
        exact_sum.map(|s| s / num_rational::BigRational::from_integer((j_max * card).into()));
    let exact_expectation = match &exact_ratio {
        Some(r) => r.to_f64().unwrap_or(float_sum / denom),
        None => float_sum / denom,
    };
    let monte_carlo = match mc {
        None => None,
        Some(cfg) => Some(monte_carlo(block, j_max, w, cfg, exact_expectation)?),
    };
    Ok(GaussianNormReport {
        j: j_max,
        t: block.t(),
        cardinality: block.len(),
        weights: w.descriptor().cloned(),
        exact_expectation,
        exact_rational: exact_ratio.map(|r| r.to_string()),
        monte_carlo,
    })
}

fn monte_carlo(
    block: &SmoothSet,
    j_max: u64,
    w: &WeightFamily,
    cfg: MonteCarloConfig,
    exact: f64,
) -> Result<MonteCarlo> {
    if cfg.samples < 2 {
        return Err(Error::Domain("Monte Carlo needs at least 2 samples".into()));
    }
    // Frequency nu = j m receives g_j / sqrt(J #A) for every m in A.
    let mut slot_of: HashMap<u64, usize> = HashMap::new();
    let mut weights = Vec::new();
    let mut routes: Vec<Vec<usize>> = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let mut r = Vec::with_capacity(block.len());
        for &m in block.members() {
            let nu = j * m;
            let next = weights.len();
            let slot = *slot_of.entry(nu).or_insert(next);
            if slot == next {
                weights.push(w.try_eval(nu)?);
            }
            r.push(slot);
        }
        routes.push(r);
    }
    let scale = 1.0 / (j_max * block.len() as u64) as f64;
    let values: Vec<f64> = (0..cfg.samples)
        .into_par_iter()
        .map(|draw| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(draw);
            let mut b = vec![0.0f64; weights.len()];
            for r in &routes {
                let g: f64 = rng.sample(StandardNormal);
                for &slot in r {
                    b[slot] += g;
                }
            }
            scale * b.iter().zip(&weights).map(|(x, w)| w * x * x).sum::<f64>()
        })
        .collect();
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let stderr = (var / m).sqrt();
    let z_score = if stderr > 0.0 {
        (mean - exact) / stderr
    } else {
        0.0
    };
    Ok(MonteCarlo {
        samples: cfg.samples,
        seed: cfg.seed,
        generator: "chacha8/stream-per-draw".into(),
        mean,
        stderr,
        z_score,
        flagged: z_score.abs() > 4.0,
    })
}
