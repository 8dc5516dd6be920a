//! Divisor-function tables, the mean of sigma_{-1} and the Gronwall records.
//!
//! `cargo run --example divisor_tables`

use dilate_lab::arith::{
    gronwall_ratio_scan, mean_sigma_minus1, mean_sigma_minus1_exact, sieve_divisor_function,
    DivisorKind, Exponent, EULER_GAMMA,
};

fn main() -> dilate_lab::Result<()> {
    let sigma = sieve_divisor_function(24, DivisorKind::Sigma(Exponent::integer(-1)))?;
    let d = sieve_divisor_function(24, DivisorKind::Count)?;
    let half = sieve_divisor_function(24, DivisorKind::Sigma("1/2".parse()?))?;
    println!(
        "{:>3} {:>5} {:>10} {:>12}",
        "n", "d(n)", "sigma_-1", "sigma_1/2"
    );
    for n in 1..=24 {
        let exact = sigma.exact(n).expect("inside the exact range");
        println!(
            "{n:>3} {:>5} {:>10} {:>12.6}",
            d.get(n),
            exact.to_string(),
            half.get(n)
        );
    }

    println!(
        "\nmean of sigma_-1 over [1, 20] = {}",
        mean_sigma_minus1_exact(20)?
    );
    for j in [1_000u64, 100_000, 1_000_000] {
        println!(
            "mean of sigma_-1 over [1, {j}] = {:.9}",
            mean_sigma_minus1(j)?
        );
    }
    println!("pi^2/6 = {:.9}", std::f64::consts::PI.powi(2) / 6.0);

    let scan = gronwall_ratio_scan(100_000)?;
    println!("\nrecord values of sigma_-1(k) / log log k for 16 <= k <= 10^5:");
    for r in &scan.records {
        println!("  k = {:>6}  ratio = {:.6}", r.k, r.ratio);
    }
    println!("limsup reference e^gamma = {:.6}", EULER_GAMMA.exp());
    Ok(())
}
