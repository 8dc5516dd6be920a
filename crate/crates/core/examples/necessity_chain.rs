//! The divisor bound behind the necessity direction and the
//! Rademacher-Menshov chaining of block bounds.
//!
//! `cargo run --example necessity_chain`

use dilate_lab::coeff::{
    build_weyl_table, necessity_bound_check, CoeffModel, SeriesCoefficients, DEFAULT_TOL,
};
use dilate_lab::correlation::{necessity_reduction, rademacher_menshov_bound};

fn main() -> dilate_lab::Result<()> {
    for delta in [0.3, 0.5, 0.7] {
        let mut worst = (0u64, 0.0f64);
        for k in 2..=100_000u64 {
            let c = necessity_bound_check(k, delta)?;
            assert!(c.pass);
            let ratio = c.sigma_tilde / c.bound;
            if ratio > worst.1 {
                worst = (k, ratio);
            }
        }
        println!(
            "delta = {delta}: bound holds for k <= 10^5, tightest at k = {} (ratio {:.4})",
            worst.0, worst.1
        );
    }

    let model = CoeffModel::power_law(0.75, None)?;
    let table = build_weyl_table(&model, 1 << 11, DEFAULT_TOL)?;
    let chain = rademacher_menshov_bound(&table, &SeriesCoefficients::Rule { p: 1.0, q: 2.0 }, 10)?;
    println!("\nchaining for a_k = k^(-3/4), c_k = 1/(k log^2(k+1)):");
    for level in &chain.levels {
        println!(
            "  r = {:>2}: block {:.3e}  r^2 * block {:.3e}  running {:.6}",
            level.r, level.block_bound, level.weighted, level.running
        );
    }
    println!("  total {:.6}", chain.total);

    let red = necessity_reduction(&model, &table, 1 << 11, 0.5)?;
    for p in red.points.iter().filter(|p| p.k.is_power_of_two()) {
        println!("  K = {:>5}: lhs {:.6}  rhs {:.6}", p.k, p.lhs, p.rhs);
    }
    Ok(())
}
