//! The dyadic-block inequality int (sum c_l f(lx))^2 <= sum c_l^2 h(l).
//!
//! `cargo run --example lemma_blocks`

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dilate_lab::coeff::{build_weyl_table, CoeffModel, DEFAULT_TOL};
use dilate_lab::correlation::{rho, verify_lemma_block};

fn main() -> dilate_lab::Result<()> {
    let model = CoeffModel::from_terms([
        (1, Complex64::new(1.0, 0.0)),
        (2, Complex64::new(0.5, 0.0)),
        (3, Complex64::new(0.0, 1.0 / 3.0)),
    ])?;
    let table = build_weyl_table(&model, 1 << 8, DEFAULT_TOL)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for r in 0..=7u32 {
        let c: Vec<f64> = (0..1usize << r)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let form = verify_lemma_block(&model, &table, r, &c, DEFAULT_TOL)?;
        println!(
            "r = {r}: integral {:>10.6}  bound {:>10.6}  ratio {:.4}  holds = {}",
            form.exact_integral,
            form.bound_rhs,
            form.ratio.unwrap_or(0.0),
            form.holds
        );
    }

    let rep = rho(&model, &table, 6, 2, DEFAULT_TOL)?;
    println!(
        "\nrho(6) on (4, 8] = {:.6}, h(6) = {:.6}",
        rep.value, rep.h_bound
    );
    Ok(())
}
