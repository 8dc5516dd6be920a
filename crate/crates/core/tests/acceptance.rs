//! Acceptance suite. Prints one `PASS` / `FAIL` line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p dilate-lab --test acceptance`.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dilate_lab::arith::{
    enumerate_smooth_block, find_doubling_t, first_primes, mean_sigma_minus1,
    sieve_divisor_function, sigma_minus1_summatory_exact, DivisorKind, Exponent,
};
use dilate_lab::coeff::{build_weyl_table, compute_g, necessity_bound_check, CoeffModel};
use dilate_lab::correlation::{exact_correlation, verify_lemma_block};
use dilate_lab::counterexample::{
    average_operator_exact, build_ft, entropy_number, ft_norm_sq_exact, gaussian_norm_expectation,
    orbit_distances, MonteCarloConfig, WeightDescriptor, WeightFamily,
};
use dilate_lab::series::{
    pair_quadrature_from_samples, quadrature_oracle, sample_direct, Quadrature,
};
use dilate_lab::spectrum::DEFAULT_FREQ_CAP;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("runtime {:.2}s exceeds {limit_s}s", elapsed.as_secs_f64())
    })
}

fn divisors_naive(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn sigma_naive(n: u64, s: i64) -> Ratio<u128> {
    divisors_naive(n)
        .into_iter()
        .map(|d| {
            if s >= 0 {
                Ratio::from_integer((d as u128).pow(s as u32))
            } else {
                Ratio::new(1, (d as u128).pow((-s) as u32))
            }
        })
        .fold(Ratio::zero(), |a, b| a + b)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_model(rng: &mut ChaCha8Rng, max_freq: u64, max_terms: usize) -> CoeffModel {
    let terms = rng.random_range(1..=max_terms);
    let pairs: Vec<(u64, Complex64)> = (0..terms)
        .map(|_| {
            (
                rng.random_range(1..=max_freq),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    CoeffModel::from_terms(pairs).expect("valid finite model")
}

fn fuzz_models() -> Vec<CoeffModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    (0..100).map(|_| random_model(&mut rng, 32, 8)).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s1 = sieve_divisor_function(200 * 200, DivisorKind::Sigma(Exponent::integer(-1)))
        .map_err(|e| e.to_string())?;
    let d = sieve_divisor_function(200 * 200, DivisorKind::Count).map_err(|e| e.to_string())?;
    ensure(s1.exact(6) == Some(Ratio::from_integer(2)), || {
        "sigma_-1(6) != 2".into()
    })?;
    ensure(d.exact(12) == Some(Ratio::from_integer(6)), || {
        "d(12) != 6".into()
    })?;
    ensure(s1.exact(16) == Some(Ratio::new(31, 16)), || {
        "sigma_-1(16) != 31/16".into()
    })?;
    let mut tables = vec![(0i64, d)];
    tables.push((-1, s1));
    for s in [-2i64, 1, 2] {
        let t = sieve_divisor_function(200 * 200, DivisorKind::Sigma(Exponent::integer(s)))
            .map_err(|e| e.to_string())?;
        tables.push((s, t));
    }
    let mut pairs = 0u64;
    for (s, t) in &tables {
        for m in 1..=200u64 {
            for n in 1..=200u64 {
                if gcd(m, n) != 1 {
                    continue;
                }
                let (a, b, c) = (
                    t.exact(m as usize),
                    t.exact(n as usize),
                    t.exact((m * n) as usize),
                );
                let (a, b, c) = (
                    a.ok_or("not exact")?,
                    b.ok_or("not exact")?,
                    c.ok_or("not exact")?,
                );
                ensure(a * b == c, || {
                    format!("multiplicativity fails for s={s} at ({m},{n})")
                })?;
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    // Oracle: divisor enumeration on a sample of entries.
    for (s, t) in &tables {
        for n in (1..=2000u64).chain([30030, 32768, 39999]) {
            ensure(t.exact(n as usize) == Some(sigma_naive(n, *s)), || {
                format!("table s={s} disagrees with enumeration at {n}")
            })?;
        }
    }
    within(elapsed, 1.0)?;
    Ok(format!(
        "{pairs} coprime pairs over 5 kinds, {:.3}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mean = mean_sigma_minus1(1_000_000).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure((1.63..=1.65).contains(&mean), || {
        format!("mean {mean} outside [1.63, 1.65]")
    })?;
    let mut direct = BigRational::zero();
    for j in 1..=2000u64 {
        let s1: u64 = divisors_naive(j).iter().sum();
        direct += BigRational::new(BigInt::from(s1), BigInt::from(j));
        let via_identity = sigma_minus1_summatory_exact(j).map_err(|e| e.to_string())?;
        ensure(via_identity == direct, || {
            format!("floor identity differs from direct sum at J={j}")
        })?;
    }
    within(elapsed, 5.0)?;
    Ok(format!(
        "mean at 10^6 = {mean:.9}, identity exact for J <= 2000"
    ))
}

fn criterion_3_and_4() -> (Outcome, Outcome) {
    let models = fuzz_models();
    let start = Instant::now();
    let rows: Vec<Result<(f64, f64, usize), String>> = models
        .par_iter()
        .map(|model| {
            let f = model.spectrum().expect("finite");
            let samples = sample_direct(f, 1 << 16);
            let mut worst_q = 0.0f64;
            let mut worst_b = f64::NEG_INFINITY;
            let mut violations = 0usize;
            for m in 1..=24u64 {
                for n in 1..=24u64 {
                    let rep = exact_correlation(model, m, n, 1e-12).map_err(|e| e.to_string())?;
                    let q = pair_quadrature_from_samples(&samples, m, n).abs();
                    worst_q = worst_q.max((rep.lambda - q).abs());
                    let gm = compute_g(model, rep.m_reduced, 1e-12)
                        .map_err(|e| e.to_string())?
                        .value;
                    let gn = compute_g(model, rep.n_reduced, 1e-12)
                        .map_err(|e| e.to_string())?
                        .value;
                    let slack = rep.lambda - (gm + gn);
                    worst_b = worst_b.max(slack);
                    if rep.lambda > gm + gn + 1e-10 {
                        violations += 1;
                    }
                }
            }
            Ok((worst_q, worst_b, violations))
        })
        .collect();
    let elapsed = start.elapsed();
    let mut worst_q = 0.0f64;
    let mut worst_b = f64::NEG_INFINITY;
    let mut violations = 0;
    for r in rows {
        match r {
            Ok((q, b, v)) => {
                worst_q = worst_q.max(q);
                worst_b = worst_b.max(b);
                violations += v;
            }
            Err(e) => return (Err(e.clone()), Err(e)),
        }
    }
    let c3 = (|| {
        ensure(worst_q <= 1e-9, || {
            format!("max |lambda - quadrature| = {worst_q:e}")
        })?;
        within(elapsed, 60.0)?;
        Ok(format!(
            "100 models x 576 pairs, max deviation {worst_q:.2e}, {:.1}s",
            elapsed.as_secs_f64()
        ))
    })();
    let c4 = (|| {
        ensure(violations == 0, || format!("{violations} violations"))?;
        Ok(format!(
            "0 violations, max lambda - (g(m')+g(n')) = {worst_b:.3e}"
        ))
    })();
    (c3, c4)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let instances: Vec<(CoeffModel, u32, Vec<f64>)> = (0..1000)
        .map(|i| {
            let model = if i % 10 == 9 {
                CoeffModel::power_law(rng.random_range(0.75..2.0), None).expect("power law")
            } else {
                random_model(&mut rng, 24, 6)
            };
            let r = rng.random_range(0..=6u32);
            let coeffs = (0..1u64 << r)
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            (model, r, coeffs)
        })
        .collect();
    let results: Vec<Result<(bool, f64, f64), String>> = instances
        .par_iter()
        .map(|(model, r, coeffs)| {
            let table = build_weyl_table(model, 1 << (r + 1), 1e-12).map_err(|e| e.to_string())?;
            let form =
                verify_lemma_block(model, &table, *r, coeffs, 1e-12).map_err(|e| e.to_string())?;
            let holds = form.exact_integral <= form.bound_rhs * (1.0 + 1e-10);
            // Parseval against the trapezoidal oracle for finite models.
            let dev = match model.spectrum() {
                Some(f) => {
                    let lo = (1u64 << r) + 1;
                    let pairs: Vec<(u64, f64)> = coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, &c)| (lo + k as u64, c))
                        .collect();
                    let q = Quadrature::BlockSquare { f, coeffs: &pairs };
                    let nodes = (q.integrand_max_frequency() as usize + 1).next_power_of_two();
                    let v = quadrature_oracle(q, nodes).map_err(|e| e.to_string())?;
                    (v - form.exact_integral).abs()
                }
                None => 0.0,
            };
            Ok((holds, form.ratio.unwrap_or(0.0), dev))
        })
        .collect();
    let mut violations = 0;
    let mut worst_ratio = 0.0f64;
    let mut worst_dev = 0.0f64;
    for r in results {
        let (h, ratio, dev) = r?;
        if !h {
            violations += 1;
        }
        worst_ratio = worst_ratio.max(ratio);
        worst_dev = worst_dev.max(dev);
    }
    ensure(violations == 0, || {
        format!("{violations} violations out of 1000")
    })?;
    ensure(worst_dev <= 1e-9, || {
        format!("Parseval vs quadrature deviation {worst_dev:e}")
    })?;
    Ok(format!(
        "1000 instances, 0 violations, max ratio {worst_ratio:.4}, Parseval/quadrature gap {worst_dev:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let a1 = Complex64::new(0.5, -0.25);
    let model = CoeffModel::from_terms([(1, a1)]).map_err(|e| e.to_string())?;
    let table = build_weyl_table(&model, 10_000, 1e-12).map_err(|e| e.to_string())?;
    let w = a1.norm_sqr();
    for n in 1..=10_000u64 {
        let expected = w * (1.0 + divisors_naive(n).len() as f64);
        let sieve = table.h(n as usize);
        let enumerated = table
            .h_by_enumeration(n as usize)
            .map_err(|e| e.to_string())?;
        ensure(sieve == expected && enumerated == expected, || {
            format!("h({n}): sieve {sieve}, enumeration {enumerated}, closed form {expected}")
        })?;
    }
    Ok("h(n) = |a_1|^2 (1 + d(n)) bit-exact on both paths for n <= 10^4".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for delta in [0.3, 0.5, 0.7] {
        let fails: Vec<u64> = (2..=100_000u64)
            .into_par_iter()
            .filter_map(|k| {
                let c = necessity_bound_check(k, delta).ok()?;
                (!c.pass).then_some(k)
            })
            .collect();
        ensure(fails.is_empty(), || {
            format!("delta={delta}: fails at {:?}", &fails[..fails.len().min(5)])
        })?;
        // Independent recomputation on a sample.
        for k in (2..=100_000u64).step_by(997).chain([5040, 55440, 83160]) {
            let divs = divisors_naive_fast(k);
            let st: f64 = divs
                .iter()
                .map(|&d| {
                    if d == 1 {
                        1.0
                    } else {
                        (d as f64).ln().powf(-delta) / d as f64
                    }
                })
                .sum();
            let s: f64 = divs.iter().sum::<u64>() as f64 / k as f64;
            let bound = 1.0 + s.powf(delta) + s.powf(1.0 - delta * delta);
            let c = necessity_bound_check(k, delta).map_err(|e| e.to_string())?;
            ensure((c.sigma_tilde - st).abs() <= 1e-12 * st, || {
                format!("sigma~({k}) mismatch")
            })?;
            ensure(st <= bound, || format!("oracle bound fails at k={k}"))?;
            worst = worst.max(st / bound);
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, 30.0)?;
    Ok(format!(
        "3 x 99999 values, max sampled ratio {worst:.3}, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn divisors_naive_fast(n: u64) -> Vec<u64> {
    let mut v = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            v.push(d);
            if d * d != n {
                v.push(n / d);
            }
        }
        d += 1;
    }
    v
}

fn criterion_8() -> Outcome {
    let block = enumerate_smooth_block(1, 3).map_err(|e| e.to_string())?;
    ensure(block.members() == [8], || {
        format!("A_3 for s=1 is {:?}", block.members())
    })?;
    let sigma = WeightFamily::new(WeightDescriptor::SigmaMinus1Pow { exponent: 1.0 })
        .map_err(|e| e.to_string())?;
    let rep = gaussian_norm_expectation(&block, 2, &sigma, None).map_err(|e| e.to_string())?;
    ensure(rep.exact_rational.as_deref() == Some("61/32"), || {
        format!("exact value {:?}", rep.exact_rational)
    })?;
    let configs: [(usize, u32, u64, WeightDescriptor); 3] = [
        (1, 3, 2, WeightDescriptor::SigmaMinus1Pow { exponent: 1.0 }),
        (2, 6, 8, WeightDescriptor::SigmaMinus1Pow { exponent: 0.5 }),
        (3, 9, 16, WeightDescriptor::LogLog),
    ];
    let mut zs = Vec::new();
    for (i, (s, t, j, w)) in configs.into_iter().enumerate() {
        let block = enumerate_smooth_block(s, t).map_err(|e| e.to_string())?;
        let w = WeightFamily::new(w).map_err(|e| e.to_string())?;
        let mc = MonteCarloConfig {
            samples: 10_000,
            seed: 1000 + i as u64,
        };
        let rep = gaussian_norm_expectation(&block, j, &w, Some(mc)).map_err(|e| e.to_string())?;
        let m = rep.monte_carlo.expect("requested");
        let z = (m.mean - rep.exact_expectation) / m.stderr;
        ensure(z.abs() <= 4.0, || format!("config {i}: z = {z:.2}"))?;
        zs.push(format!("{z:+.2}"));
    }
    Ok(format!(
        "61/32 exact; Monte Carlo z-scores {}",
        zs.join(", ")
    ))
}

fn brute_smooth(s: usize, t: u32) -> Vec<u64> {
    let primes = first_primes(s);
    (1u64 << t..1u64 << (t + 1))
        .filter(|&n| {
            let mut m = n;
            for &p in &primes {
                while m % p == 0 {
                    m /= p;
                }
            }
            m == 1
        })
        .collect()
}

fn criterion_9() -> Outcome {
    for s in 1..=4 {
        for t in 0..=14 {
            let block = enumerate_smooth_block(s, t).map_err(|e| e.to_string())?;
            ensure(block.members() == brute_smooth(s, t).as_slice(), || {
                format!("A_{t} for s={s} differs from brute force")
            })?;
        }
    }
    let mut found = Vec::new();
    for (s, d) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
        let w = find_doubling_t(s, d, 40)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no doubling T for s={s}, d={d}"))?;
        let a = brute_smooth(s, w.t).len();
        let b = brute_smooth(s, w.t + d).len();
        ensure(
            a == w.count_t && b == w.count_t_plus_d && b <= 2 * a,
            || format!("witness for s={s}, d={d} not confirmed"),
        )?;
        for t in 0..w.t {
            let (a, b) = (brute_smooth(s, t).len(), brute_smooth(s, t + d).len());
            ensure(b > 2 * a, || {
                format!("T={t} already doubles for s={s}, d={d}")
            })?;
        }
        found.push(format!("(s={s},d={d})->T={}", w.t));
    }
    Ok(format!(
        "brute force agrees for s<=4, T<=14; {}",
        found.join(" ")
    ))
}

fn dilate_exact(f: &BTreeMap<u64, BigRational>, j: u64) -> BTreeMap<u64, BigRational> {
    f.iter().map(|(k, v)| (k * j, v.clone())).collect()
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let f: BTreeMap<u64, BigRational> = (0..rng.random_range(1..6))
            .map(|_| {
                let k = rng.random_range(1..=16u64);
                let v = BigRational::new(
                    rng.random_range(-50i64..50).into(),
                    rng.random_range(1i64..20).into(),
                );
                (k, v)
            })
            .collect();
        for n in 1..=8 {
            for j in 1..=8 {
                let lhs = average_operator_exact(&dilate_exact(&f, j), n, DEFAULT_FREQ_CAP)
                    .map_err(|e| e.to_string())?;
                let rhs = dilate_exact(
                    &average_operator_exact(&f, n, DEFAULT_FREQ_CAP).map_err(|e| e.to_string())?,
                    j,
                );
                let strip = |m: BTreeMap<u64, BigRational>| -> BTreeMap<u64, BigRational> {
                    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
                };
                ensure(strip(lhs) == strip(rhs), || {
                    format!("S_{n} T_{j} != T_{j} S_{n}")
                })?;
            }
        }
    }
    for (s, t) in [(1, 3), (2, 5), (3, 9), (4, 12)] {
        let block = enumerate_smooth_block(s, t).map_err(|e| e.to_string())?;
        ensure(ft_norm_sq_exact(&block) == BigRational::one(), || {
            format!("||f_T|| != 1 for s={s}, T={t}")
        })?;
        let f = build_ft(&block).map_err(|e| e.to_string())?;
        ensure((f.norm_sq() - 1.0).abs() <= 1e-13, || {
            "float norm of f_T drifts".into()
        })?;
    }
    let block = enumerate_smooth_block(3, 9).map_err(|e| e.to_string())?;
    let f = build_ft(&block).map_err(|e| e.to_string())?;
    let radii = [
        0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.2, 1.5,
    ];
    for _ in 0..30 {
        let k = rng.random_range(1..=10usize);
        let mut idx: Vec<u64> = Vec::new();
        while idx.len() < k {
            let i = rng.random_range(1..=64u64);
            if !idx.contains(&i) {
                idx.push(i);
            }
        }
        let orbit = orbit_distances(&f, &idx, DEFAULT_FREQ_CAP).map_err(|e| e.to_string())?;
        let mut prev = usize::MAX;
        for &eps in &radii {
            let e = entropy_number(&orbit, eps).map_err(|e| e.to_string())?;
            let best = (1u32..1 << k)
                .filter(|&mask| {
                    (0..k)
                        .all(|p| (0..k).any(|c| mask >> c & 1 == 1 && orbit.distances[c][p] < eps))
                })
                .map(|m| m.count_ones() as usize)
                .min()
                .expect("all centres cover");
            ensure(e.exact && e.count == best, || {
                format!("entropy {} vs exhaustive {best}", e.count)
            })?;
            ensure(e.count <= prev, || "entropy number not monotone".into())?;
            prev = e.count;
        }
    }
    Ok(
        "commutation exact for n,j <= 8; ||f_T|| = 1 exact; entropy matches exhaustive cover"
            .into(),
    )
}

fn strip_meta(stdout: &[u8]) -> String {
    let text = String::from_utf8_lossy(stdout).into_owned();
    match serde_json::from_str::<serde_json::Value>(&text) {
        Ok(mut v) => {
            if let Some(o) = v.as_object_mut() {
                o.remove("meta");
            }
            v.to_string()
        }
        Err(_) => text,
    }
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let model = dir.path().join("m.spec");
    std::fs::write(
        &model,
        "model = finite{(1,1),(2,0.5,-0.25),(5,0.125)}\ncoeffs = reciprocal\n",
    )
    .map_err(|e| e.to_string())?;
    let m = model.to_str().expect("utf-8 path");
    let runs: Vec<Vec<&str>> = vec![
        vec!["lemma", "--model", m, "--r", "4", "--coeffs", "random:42"],
        vec![
            "--seed", "7", "lemma", "--model", m, "--r", "3", "--coeffs", "random",
        ],
        vec![
            "--seed",
            "11",
            "counterexample",
            "--s",
            "3",
            "--d",
            "2",
            "--Tmax",
            "40",
            "--mc",
            "2000",
        ],
        vec![
            "--seed",
            "3",
            "--threads",
            "2",
            "counterexample",
            "--s",
            "2",
            "--d",
            "1",
            "--Tmax",
            "20",
            "--mc",
            "500",
            "--weights",
            "loglog",
        ],
        vec![
            "trajectory",
            "--model",
            m,
            "--mode",
            "sum",
            "--checkpoints",
            "2^4..2^9",
            "--grid",
            "2^14",
        ],
        vec![
            "--format",
            "json",
            "trajectory",
            "--model",
            m,
            "--checkpoints",
            "2^4..2^8",
            "--grid",
            "2^13",
        ],
        vec!["arith", "--kind", "sigma", "--s", "-1", "--range", "50"],
        vec!["corr", "--model", m, "--m", "6", "--n", "10"],
    ];
    let bin = env!("CARGO_BIN_EXE_dilate-lab");
    for args in &runs {
        let a = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        let b = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(a.status.success(), || {
            format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr))
        })?;
        ensure(strip_meta(&a.stdout) == strip_meta(&b.stdout), || {
            format!("{args:?} not reproducible")
        })?;
    }
    Ok(format!(
        "{} seeded invocations reproduced bit-for-bit",
        runs.len()
    ))
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    report(name, r)
}

fn report(name: &str, r: Outcome) -> bool {
    match r {
        Ok(detail) => {
            println!("PASS {name}: {detail}");
            true
        }
        Err(why) => {
            println!("FAIL {name}: {why}");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    ok &= run("criterion 1 (arithmetic exactness)", criterion_1);
    ok &= run("criterion 2 (mean of sigma_-1)", criterion_2);
    let (c3, c4) = catch_unwind(criterion_3_and_4)
        .unwrap_or_else(|_| (Err("panicked".into()), Err("panicked".into())));
    ok &= report("criterion 3 (correlation vs quadrature)", c3);
    ok &= report("criterion 4 (correlation bound)", c4);
    ok &= run("criterion 5 (dyadic block inequality)", criterion_5);
    ok &= run("criterion 6 (closed-form h)", criterion_6);
    ok &= run("criterion 7 (necessity bound)", criterion_7);
    ok &= run("criterion 8 (Gaussian norm)", criterion_8);
    ok &= run("criterion 9 (smooth blocks)", criterion_9);
    ok &= run("criterion 10 (operator laws)", criterion_10);
    ok &= run("criterion 11 (CLI determinism)", criterion_11);
    if !ok {
        std::process::exit(1);
    }
}
