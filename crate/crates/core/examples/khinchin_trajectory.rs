//! Grid suprema of N^{-1} sum_{k <= N} f(kx) and of sum_{k <= N} c_k f(kx).
//!
//! The numbers are finite-N statistics on a finite grid; they say nothing
//! certain about almost-everywhere behaviour.
//!
//! `cargo run --example khinchin_trajectory`

use num_complex::Complex64;

use dilate_lab::coeff::{build_weyl_table, CoeffModel, SeriesCoefficients, DEFAULT_TOL};
use dilate_lab::numeric::dyadic_checkpoints;
use dilate_lab::series::{khinchin_trajectory, TrajectoryMode, DEFAULT_TRAJECTORY_EPS};

fn main() -> dilate_lab::Result<()> {
    // Truncated sawtooth: f(x) = -2 sum_{k <= 64} sin(2 pi k x) / k.
    let sawtooth =
        CoeffModel::from_terms((1..=64).map(|k| (k, Complex64::new(0.0, 1.0 / k as f64))))?;
    let f = sawtooth.spectrum().expect("finite").clone();

    let checkpoints: Vec<u64> = dyadic_checkpoints(1 << 10)
        .into_iter()
        .filter(|&n| n >= 16)
        .collect();
    let table = build_weyl_table(&sawtooth, 1 << 10, DEFAULT_TOL)?;
    for (name, mode) in [
        ("average", TrajectoryMode::Average),
        (
            "sum with c_k = 1/k",
            TrajectoryMode::WeightedSum(SeriesCoefficients::Reciprocal),
        ),
    ] {
        let rep = khinchin_trajectory(
            &f,
            &mode,
            &checkpoints,
            1 << 16,
            DEFAULT_TRAJECTORY_EPS,
            Some(&table),
        )?;
        println!("\n{name}:");
        println!(
            "{:>6} {:>12} {:>8} {:>12}",
            "N", "grid_sup", "argmax", "normalized"
        );
        for p in &rep.points {
            println!(
                "{:>6} {:>12.6} {:>8} {:>12.6}",
                p.n,
                p.grid_sup,
                p.argmax_t,
                p.normalized.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
