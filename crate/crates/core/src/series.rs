//! Partial sums `sum_{k <= N} c_k f(kx)` in the frequency domain, their
//! evaluation on uniform grids, and a trapezoidal quadrature oracle.
//!
//! Grid suprema are lower bounds on true suprema and are reported as
//! `grid_sup`. Finite data says nothing about almost-everywhere behaviour;
//! trajectories are statistics for trend inspection only.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::coeff::{SeriesCoefficients, WeylTable};
use crate::error::{Error, Result};
use crate::spectrum::{Convention, Spectrum};

/// Default `eps` in the normalization `sqrt(N) (log N)^{3/2 + eps} hhat(N)^{1/2}`.
pub const DEFAULT_TRAJECTORY_EPS: f64 = 0.1;

/// Spectrum of `sum_{k <= N} c_k f(kx)`: `B_nu = sum_{k | nu, k <= N} c_k a_{nu/k}`.
pub fn assemble_partial_sum_spectrum(
    f: &Spectrum,
    coeffs: &SeriesCoefficients,
    n: u64,
    freq_cap: u64,
) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::Domain("partial sum needs N >= 1".into()));
    }
    let mut out = Spectrum::new(f.convention());
    if f.is_empty() {
        return Ok(out);
    }
    let top = f.max_frequency();
    for k in 1..=n {
        let c = coeffs.get(k);
        if c == 0.0 {
            continue;
        }
        let reach = k.checked_mul(top).filter(|&v| v <= freq_cap);
        if reach.is_none() {
            return Err(Error::Capacity {
                what: format!("partial-sum frequency {k} * {top}"),
                cap: freq_cap,
            });
        }
        for (nu, a) in f.iter() {
            out.add(k * nu, a * c);
        }
    }
    Ok(out)
}

fn check_grid(max_freq: u64, grid: usize) -> Result<()> {
    let need = 2 * max_freq + 1;
    if (grid as u64) < need {
        return Err(Error::Domain(format!(
            "grid of {grid} points aliases frequency {max_freq}; minimal admissible grid is {need}"
        )));
    }
    Ok(())
}

fn grid_coefficients(f: &Spectrum, grid: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); grid];
    for (nu, a) in f.iter() {
        let nu = nu as usize;
        buf[nu] += a;
        if f.convention() == Convention::Real {
            buf[grid - nu] += a.conj();
        }
    }
    buf
}

fn inverse_transform(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(buf.len()).process(buf);
}

/// Values at `x = t/G`, `t = 0..G`, through an inverse FFT of length `G`.
/// Under the real convention the values are real up to rounding.
pub fn evaluate_complex_on_grid(f: &Spectrum, grid: usize) -> Result<Vec<Complex64>> {
    check_grid(f.max_frequency(), grid)?;
    let mut buf = grid_coefficients(f, grid);
    inverse_transform(&mut buf);
    Ok(buf)
}

/// Real values `f(t/G)` of a real-convention spectrum.
pub fn evaluate_on_grid(f: &Spectrum, grid: usize) -> Result<Vec<f64>> {
    if f.convention() != Convention::Real {
        return Err(Error::Domain(
            "real grid evaluation needs a real-convention spectrum".into(),
        ));
    }
    Ok(evaluate_complex_on_grid(f, grid)?
        .into_iter()
        .map(|z| z.re)
        .collect())
}

/// Direct summation at a single point.
pub fn evaluate_direct(f: &Spectrum, x: f64) -> Complex64 {
    let tau = std::f64::consts::TAU;
    let mut acc = Complex64::new(0.0, 0.0);
    for (nu, a) in f.iter() {
        let th = tau * ((nu as f64 * x) % 1.0);
        let z = a * Complex64::new(th.cos(), th.sin());
        acc += match f.convention() {
            Convention::Real => Complex64::new(2.0 * z.re, 0.0),
            Convention::OneSided => z,
        };
    }
    acc
}

#[derive(Debug, Clone)]
pub enum TrajectoryMode {
    /// `N^{-1} sum_{k <= N} f(kx)`
    Average,
    /// `sum_{k <= N} c_k f(kx)`
    WeightedSum(SeriesCoefficients),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub n: u64,
    pub grid_sup: f64,
    pub argmax_t: usize,
    /// `|sum| / (sqrt(N) (log N)^{3/2 + eps} hhat(N)^{1/2})` at the grid
    /// maximum, where `|sum|` is `N grid_sup` in average mode. Absent for
    /// `N = 1` or without a Weyl table.
    pub normalized: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub grid: usize,
    pub eps: f64,
    pub points: Vec<TrajectoryPoint>,
}

/// Grid suprema of averages or weighted partial sums at increasing
/// checkpoints. Terms are accumulated once into a dense coefficient buffer
/// and each checkpoint costs one inverse FFT.
///
/// Frequencies are folded modulo the grid size, which leaves the values at
/// the grid points unchanged, so the grid need not exceed `2 N F`.
pub fn khinchin_trajectory(
    f: &Spectrum,
    mode: &TrajectoryMode,
    checkpoints: &[u64],
    grid: usize,
    eps: f64,
    weyl: Option<&WeylTable>,
) -> Result<TrajectoryReport> {
    if checkpoints.is_empty() || checkpoints[0] == 0 {
        return Err(Error::Domain(
            "checkpoints must be non-empty and positive".into(),
        ));
    }
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    if grid == 0 {
        return Err(Error::Domain("grid must have at least one point".into()));
    }
    let n_max = *checkpoints.last().expect("non-empty");
    n_max
        .checked_mul(f.max_frequency())
        .ok_or_else(|| Error::Range("checkpoint frequency overflows".into()))?;
    if let Some(t) = weyl {
        if (n_max as usize) > t.n() {
            return Err(Error::Range(format!(
                "Weyl table covers 1..={} but the last checkpoint is {n_max}",
                t.n()
            )));
        }
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); grid];
    let mut done = 0u64;
    let mut points = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        for k in done + 1..=n {
            let c = match mode {
                TrajectoryMode::Average => 1.0,
                TrajectoryMode::WeightedSum(cs) => cs.get(k),
            };
            if c == 0.0 {
                continue;
            }
            for (nu, a) in f.iter() {
                let mu = (k * nu % grid as u64) as usize;
                acc[mu] += a * c;
                if f.convention() == Convention::Real {
                    acc[(grid - mu) % grid] += (a * c).conj();
                }
            }
        }
        done = n;
        let mut buf = acc.clone();
        inverse_transform(&mut buf);
        let scale = match mode {
            TrajectoryMode::Average => 1.0 / n as f64,
            TrajectoryMode::WeightedSum(_) => 1.0,
        };
        let (argmax_t, raw_sup) =
            buf.iter()
                .map(|z| z.norm())
                .enumerate()
                .fold(
                    (0, 0.0),
                    |best, (t, v)| if v > best.1 { (t, v) } else { best },
                );
        let grid_sup = raw_sup * scale;
        let normalized = match weyl {
            Some(t) if n >= 2 => {
                let nf = n as f64;
                let denom = nf.sqrt() * nf.ln().powf(1.5 + eps) * t.h_hat(n as usize).sqrt();
                (denom > 0.0).then(|| raw_sup / denom)
            }
            _ => None,
        };
        points.push(TrajectoryPoint {
            n,
            grid_sup,
            argmax_t,
            normalized,
        });
    }
    Ok(TrajectoryReport { grid, eps, points })
}

/// Integrands accepted by [`quadrature_oracle`].
#[derive(Debug, Clone, Copy)]
pub enum Quadrature<'a> {
    /// `int |f|^2`
    Square(&'a Spectrum),
    /// `int f(mx) conj(f(nx))`
    Pair { f: &'a Spectrum, m: u64, n: u64 },
    /// `int |sum_l c_l f(l x)|^2` over `(l, c_l)` pairs.
    BlockSquare {
        f: &'a Spectrum,
        coeffs: &'a [(u64, f64)],
    },
}

impl Quadrature<'_> {
    /// Largest frequency of the integrand.
    pub fn integrand_max_frequency(&self) -> u64 {
        match *self {
            Quadrature::Square(f) => 2 * f.max_frequency(),
            Quadrature::Pair { f, m, n } => (m + n) * f.max_frequency(),
            Quadrature::BlockSquare { f, coeffs } => {
                let l = coeffs.iter().map(|&(l, _)| l).max().unwrap_or(0);
                2 * l * f.max_frequency()
            }
        }
    }
}

/// Samples of `f` at `t / nodes` by direct summation against a twiddle table.
pub fn sample_direct(f: &Spectrum, nodes: usize) -> Vec<Complex64> {
    let tau = std::f64::consts::TAU;
    let twiddle: Vec<Complex64> = (0..nodes)
        .map(|j| {
            let th = tau * j as f64 / nodes as f64;
            Complex64::new(th.cos(), th.sin())
        })
        .collect();
    let terms: Vec<(u64, Complex64)> = f.iter().collect();
    let real = f.convention() == Convention::Real;
    (0..nodes as u64)
        .map(|t| {
            let mut z = Complex64::new(0.0, 0.0);
            for &(nu, a) in &terms {
                let w = twiddle[((nu % nodes as u64) * t % nodes as u64) as usize];
                z += a * w;
            }
            if real {
                Complex64::new(2.0 * z.re, 0.0)
            } else {
                z
            }
        })
        .collect()
}

/// Trapezoidal rule on `nodes` uniform points. Exact up to rounding when the
/// integrand's largest frequency is below `nodes`.
pub fn quadrature_oracle(q: Quadrature<'_>, nodes: usize) -> Result<f64> {
    let need = q.integrand_max_frequency() + 1;
    if (nodes as u64) < need {
        return Err(Error::Domain(format!(
            "quadrature with {nodes} nodes is inexact; at least {need} needed"
        )));
    }
    let base = match q {
        Quadrature::Square(f) | Quadrature::Pair { f, .. } | Quadrature::BlockSquare { f, .. } => f,
    };
    let vals = sample_direct(base, nodes);
    let nn = nodes as u64;
    let at = |k: u64, t: u64| vals[(k % nn * t % nn) as usize];
    let mut sum = 0.0;
    for t in 0..nn {
        sum += match q {
            Quadrature::Square(_) => vals[t as usize].norm_sqr(),
            Quadrature::Pair { m, n, .. } => (at(m, t) * at(n, t).conj()).re,
            Quadrature::BlockSquare { coeffs, .. } => coeffs
                .iter()
                .map(|&(l, c)| at(l, t) * c)
                .sum::<Complex64>()
                .norm_sqr(),
        };
    }
    Ok(sum / nodes as f64)
}

/// Trapezoidal `int f(mx) f(nx)` reusing precomputed samples of `f` on
/// `samples.len()` nodes.
pub fn pair_quadrature_from_samples(samples: &[Complex64], m: u64, n: u64) -> f64 {
    let nn = samples.len();
    let (dm, dn) = ((m % nn as u64) as usize, (n % nn as u64) as usize);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut sum = 0.0;
    for _ in 0..nn {
        let (a, b) = (samples[ia], samples[ib]);
        sum += a.re * b.re + a.im * b.im;
        ia += dm;
        if ia >= nn {
            ia -= nn;
        }
        ib += dn;
        if ib >= nn {
            ib -= nn;
        }
    }
    sum / nn as f64
}
