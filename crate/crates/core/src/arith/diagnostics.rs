use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::divisor::{sieve_divisor_function_with, DivisorKind, Exponent, SieveConfig};
use super::smooth::first_primes;
use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `(1/J) sum_{j <= J} sigma_{-1}(j)`, through
/// `sum_{j <= J} sigma_{-1}(j) = sum_{e <= J} floor(J/e) / e`.
pub fn mean_sigma_minus1(j_max: u64) -> Result<f64> {
    if j_max == 0 {
        return Err(Error::Domain("mean over an empty range".into()));
    }
    let total: f64 = (1..=j_max).map(|e| (j_max / e) as f64 / e as f64).sum();
    Ok(total / j_max as f64)
}

/// Exact `sum_{j <= J} sigma_{-1}(j)` by the same floor identity, over the
/// common denominator `lcm(1..=J)`.
pub fn sigma_minus1_summatory_exact(j_max: u64) -> Result<BigRational> {
    if j_max == 0 {
        return Ok(BigRational::zero());
    }
    let mut lcm = BigUint::one();
    for p in first_primes_up_to(j_max) {
        let mut pk = p;
        while pk <= j_max / p {
            pk *= p;
        }
        lcm *= pk;
    }
    let mut numer = BigUint::zero();
    for e in 1..=j_max {
        numer += (&lcm / e) * (j_max / e);
    }
    Ok(BigRational::new(numer.into(), lcm.into()))
}

pub fn mean_sigma_minus1_exact(j_max: u64) -> Result<BigRational> {
    if j_max == 0 {
        return Err(Error::Domain("mean over an empty range".into()));
    }
    Ok(sigma_minus1_summatory_exact(j_max)? / BigRational::from_integer(j_max.into()))
}

fn first_primes_up_to(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 1;
    loop {
        let ps = first_primes(k);
        let last = *ps.last().expect("k >= 1");
        if last > n {
            out.extend(ps.into_iter().filter(|&p| p <= n));
            return out;
        }
        k *= 2;
    }
}

/// A new running maximum of `sigma_{-1}(k) / log log k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GronwallRecord {
    pub k: u64,
    pub sigma_minus1: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GronwallScan {
    pub k_max: u64,
    pub records: Vec<GronwallRecord>,
    /// `e^gamma`, the limsup constant, shown for reference only.
    pub reference_line: f64,
}

/// Running maxima of `sigma_{-1}(k) / ln ln k` over `16 <= k <= K`.
pub fn gronwall_ratio_scan(k_max: u64) -> Result<GronwallScan> {
    if k_max < 16 {
        return Err(Error::Domain(format!(
            "Gronwall scan needs K >= 16 (log log k <= 0 below), got {k_max}"
        )));
    }
    let table = sieve_divisor_function_with(
        k_max as usize,
        DivisorKind::Sigma(Exponent::integer(1)),
        SieveConfig { exact_limit: 0 },
    )?;
    let mut records = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for k in 16..=k_max {
        // sigma_1(k) is an exact integer in f64, so the quotient is correctly rounded.
        let sigma = table.get(k as usize) / k as f64;
        let ratio = sigma / (k as f64).ln().ln();
        if ratio > best {
            best = ratio;
            records.push(GronwallRecord {
                k,
                sigma_minus1: sigma,
                ratio,
            });
        }
    }
    Ok(GronwallScan {
        k_max,
        records,
        reference_line: EULER_GAMMA.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_at_one() {
        assert_eq!(mean_sigma_minus1(1).unwrap(), 1.0);
        assert_eq!(mean_sigma_minus1_exact(1).unwrap(), BigRational::one());
        assert!(mean_sigma_minus1(0).is_err());
    }

    #[test]
    fn mean_at_six() {
        // 1 + 3/2 + 4/3 + 7/4 + 6/5 + 2 = 527/60
        let expect = BigRational::new(527.into(), 360.into());
        assert_eq!(mean_sigma_minus1_exact(6).unwrap(), expect);
        assert!((mean_sigma_minus1(6).unwrap() - 527.0 / 360.0).abs() < 1e-15);
    }

    #[test]
    fn scan_domain() {
        assert!(matches!(gronwall_ratio_scan(15), Err(Error::Domain(_))));
        let scan = gronwall_ratio_scan(16).unwrap();
        assert_eq!(scan.records.len(), 1);
        assert_eq!(scan.records[0].k, 16);
        assert_eq!(scan.records[0].sigma_minus1, 31.0 / 16.0);
    }
}
