//! The smooth-block construction: f_T, its averaging orbit, entropy numbers
//! and the weighted Gaussian norm.
//!
//! `cargo run --example counterexample_bundle`

use dilate_lab::counterexample::{
    check_weight_properties, theorem1_experiment, ExperimentConfig, MonteCarloConfig,
    WeightDescriptor, WeightFamily,
};

fn main() -> dilate_lab::Result<()> {
    let w = WeightFamily::new(WeightDescriptor::LogLog)?;
    let mut cfg = ExperimentConfig::new(6, 3, 60);
    cfg.eps_list = vec![1.0, 0.5, 0.25, 0.125];
    cfg.monte_carlo = Some(MonteCarloConfig {
        samples: 4000,
        seed: 7,
    });
    let bundle = theorem1_experiment(&cfg, &w)?;

    println!(
        "T = {}, #A_T = {}, #A_(T+d) = {}",
        bundle.t, bundle.cardinalities.count_t, bundle.cardinalities.count_t_plus_d
    );
    println!("orbit indices {:?}", bundle.orbit_indices);
    for row in &bundle.orbit_distances {
        let cells: Vec<String> = row.iter().map(|d| format!("{d:.4}")).collect();
        println!("  {}", cells.join("  "));
    }
    for e in &bundle.entropy {
        println!("N({}) = {} (exact = {})", e.eps, e.count, e.exact);
    }
    if let Some(v) = bundle.sqrt_log_t {
        println!("sqrt(log T) = {v:.4}");
    }
    println!(
        "E||F||_w^2 = {:.6}, Monte Carlo {:.6} +- {:.6}",
        bundle.exact_norm_expectation,
        bundle.mc_mean.unwrap_or(f64::NAN),
        bundle.mc_stderr.unwrap_or(f64::NAN)
    );

    let sigma = WeightFamily::new(WeightDescriptor::SigmaMinus1Pow { exponent: 1.0 })?;
    let report = check_weight_properties(&sigma, 2000, 1_000_000)?;
    println!(
        "\nsigma_-1 sub-multiplicative on [1, 2000]: {}",
        report.submultiplicative
    );
    Ok(())
}
