//! Correlations of f(mx) and f(nx): GCD reduction, the bound g(m') + g(n'),
//! and a quadrature cross-check.
//!
//! `cargo run --example dilation_correlations`

use num_complex::Complex64;

use dilate_lab::coeff::{CoeffModel, DEFAULT_TOL};
use dilate_lab::correlation::{attach_quadrature, exact_correlation};

fn main() -> dilate_lab::Result<()> {
    let reciprocal =
        CoeffModel::from_terms((1..=8).map(|k| (k, Complex64::new(1.0 / k as f64, 0.0))))?;
    println!(
        "{:>3} {:>3} {:>3} {:>3} {:>3} {:>12} {:>12} {:>12}",
        "m", "n", "d", "m'", "n'", "value", "bound", "quadrature"
    );
    for (m, n) in [(1, 1), (1, 2), (2, 4), (4, 6), (6, 9), (3, 7), (12, 18)] {
        let mut rep = exact_correlation(&reciprocal, m, n, DEFAULT_TOL)?;
        attach_quadrature(&mut rep, &reciprocal, 1 << 12)?;
        let q = rep.quadrature_check.as_ref().expect("finite model").value;
        println!(
            "{m:>3} {n:>3} {:>3} {:>3} {:>3} {:>12.9} {:>12.9} {:>12.9}",
            rep.d, rep.m_reduced, rep.n_reduced, rep.exact_value, rep.bound, q
        );
    }

    let power = CoeffModel::power_law(1.0, None)?;
    println!("\na_k = 1/k, infinite support:");
    for (m, n) in [(1, 2), (2, 3), (5, 7)] {
        let rep = exact_correlation(&power, m, n, DEFAULT_TOL)?;
        println!(
            "  ({m}, {n}): {:.12} +- {:.1e}  (pi^2 / (3 m' n') = {:.12})",
            rep.exact_value,
            rep.certified_error,
            std::f64::consts::PI.powi(2) / 3.0 / (rep.m_reduced * rep.n_reduced) as f64
        );
    }
    Ok(())
}
