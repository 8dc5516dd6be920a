//! The functionals g, G, h for a few coefficient models, and the criterion
//! sums built from them.
//!
//! `cargo run --example weyl_factors`

use dilate_lab::coeff::{
    build_weyl_table, corollary1_condition_check, koksma_sum, parse_model_spec,
    theorem2_condition_sum, CoeffModel, Cor1Condition, KoksmaWeight, SeriesCoefficients,
    DEFAULT_TOL,
};

fn main() -> dilate_lab::Result<()> {
    let spec = parse_model_spec(
        "# a_k = k^{-1}
         model = powerlaw{s=1}
         coeffs = rule{p=1, q=2}",
    )?;
    let model = CoeffModel::from_descriptor(spec.model.as_ref().expect("model line"))?;
    let coeffs = SeriesCoefficients::from_descriptor(spec.coeffs.as_ref().expect("coeffs line"));

    let table = build_weyl_table(&model, 32, DEFAULT_TOL)?;
    println!(
        "{:>3} {:>14} {:>14} {:>14} {:>10}",
        "n", "g", "G", "h", "error"
    );
    for n in [1, 2, 3, 4, 6, 8, 12, 16, 24, 32] {
        println!(
            "{n:>3} {:>14.10} {:>14.10} {:>14.10} {:>10.2e}",
            table.g(n),
            table.big_g(n),
            table.h(n),
            table.h_error(n)
        );
    }

    let koksma = koksma_sum(&model, &KoksmaWeight::SigmaMinus1, 1 << 12)?;
    println!("\nsum |a_k|^2 sigma_-1(k) up to 2^12: {:.6}", koksma.total);

    let big = build_weyl_table(&model, 1 << 12, DEFAULT_TOL)?;
    let t2 = theorem2_condition_sum(&big, &coeffs, 1 << 12, 2.0)?;
    println!("sum c_k^2 h(k) log^2 k up to 2^12: {:.6}", t2.total);

    for cond in [
        Cor1Condition::RegularVariation { threshold: 0.05 },
        Cor1Condition::Monotone { gamma: 0.5 },
        Cor1Condition::UniformDilation,
    ] {
        let v = corollary1_condition_check(&model, cond, 1 << 10, DEFAULT_TOL)?;
        println!("{cond:?}: pass = {}", v.pass);
    }
    Ok(())
}
