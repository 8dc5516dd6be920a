use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper end of the exactly-represented part of a divisor table.
pub const DEFAULT_EXACT_LIMIT: usize = 100_000;

const SEGMENT_LEN: usize = 1 << 16;

/// A rational exponent `s = num / den` in lowest terms, `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Exponent {
    num: i64,
    den: u64,
}

impl Exponent {
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("exponent denominator is zero".into()));
        }
        let g = num.unsigned_abs().gcd(&den).max(1);
        Ok(Self {
            num: num / g as i64,
            den: den / g,
        })
    }

    pub fn integer(num: i64) -> Self {
        Self { num, den: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `p`, `p/q` and terminating decimals such as `-0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational exponent `{s}`"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Self::new(p, q);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.trim_start().starts_with('-');
            let int_part: i64 = match int.trim() {
                "" | "-" | "+" => 0,
                other => other.parse().map_err(|_| bad())?,
            };
            let den = 10u64.pow(frac.len() as u32);
            let frac_part: i64 = frac.parse().map_err(|_| bad())?;
            let mag = int_part.abs() * den as i64 + frac_part;
            return Self::new(if negative { -mag } else { mag }, den);
        }
        Ok(Self::integer(s.parse().map_err(|_| bad())?))
    }
}

/// Which multiplicative divisor-sum function a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivisorKind {
    /// `d(n)`, the number of divisors.
    Count,
    /// `sigma_s(n) = sum_{d | n} d^s`.
    Sigma(Exponent),
}

impl DivisorKind {
    fn exponent(&self) -> Exponent {
        match self {
            DivisorKind::Count => Exponent::integer(0),
            DivisorKind::Sigma(s) => *s,
        }
    }
}

impl fmt::Display for DivisorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorKind::Count => write!(f, "d"),
            DivisorKind::Sigma(s) => write!(f, "sigma_{s}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    /// Values for `n <= exact_limit` are kept as exact rationals when the
    /// exponent is an integer.
    pub exact_limit: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            exact_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

/// Values of `d(n)` or `sigma_s(n)` for `1 <= n <= N`.
///
/// Entries up to [`exact_limit`](Self::exact_limit) are exact rationals
/// (integer exponents only); every entry also has an `f64` value.
#[derive(Debug, Clone)]
pub struct DivisorFunctionTable {
    kind: DivisorKind,
    len: usize,
    exact: Vec<Ratio<u128>>,
    approx: Vec<f64>,
}

impl DivisorFunctionTable {
    pub fn kind(&self) -> DivisorKind {
        self.kind
    }

    /// The range bound `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Largest `n` whose value is held exactly (0 when nothing is exact).
    pub fn exact_limit(&self) -> usize {
        self.exact.len().saturating_sub(1)
    }

    pub fn exact(&self, n: usize) -> Option<Ratio<u128>> {
        (n >= 1 && n < self.exact.len()).then(|| self.exact[n])
    }

    /// Floating value at `n`; panics outside `1..=N`.
    pub fn get(&self, n: usize) -> f64 {
        assert!(
            n >= 1 && n <= self.len,
            "index {n} outside table 1..={}",
            self.len
        );
        self.approx[n]
    }

    /// Floating values indexed by `n`; slot 0 is unused and holds 0.
    pub fn values(&self) -> &[f64] {
        &self.approx
    }
}

/// Builds a divisor-function table over `[1, n_max]` with the default
/// exactness boundary.
pub fn sieve_divisor_function(n_max: usize, kind: DivisorKind) -> Result<DivisorFunctionTable> {
    sieve_divisor_function_with(n_max, kind, SieveConfig::default())
}

pub fn sieve_divisor_function_with(
    n_max: usize,
    kind: DivisorKind,
    config: SieveConfig,
) -> Result<DivisorFunctionTable> {
    if n_max == 0 {
        return Err(Error::Range("divisor table needs N >= 1".into()));
    }
    let s = kind.exponent();
    let exact = if s.is_integer() {
        exact_sieve(n_max.min(config.exact_limit), s.numer())?
    } else {
        Vec::new()
    };
    let mut approx = float_sieve(n_max, s.to_f64());
    for (n, v) in exact.iter().enumerate().skip(1) {
        approx[n] = ratio_to_f64(v);
    }
    Ok(DivisorFunctionTable {
        kind,
        len: n_max,
        exact,
        approx,
    })
}

fn ratio_to_f64(r: &Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn overflow(n: usize) -> Error {
    Error::Range(format!(
        "divisor sum overflows 128-bit representation at n = {n}"
    ))
}

fn exact_sieve(limit: usize, s: i64) -> Result<Vec<Ratio<u128>>> {
    let t = s.unsigned_abs() as u32;
    let mut acc = vec![0u128; limit + 1];
    for d in 1..=limit {
        let p = (d as u128).checked_pow(t).ok_or_else(|| overflow(d))?;
        for m in (d..=limit).step_by(d) {
            acc[m] = acc[m].checked_add(p).ok_or_else(|| overflow(m))?;
        }
    }
    let mut out = Vec::with_capacity(limit + 1);
    out.push(Ratio::from_integer(0));
    for (n, &sum) in acc.iter().enumerate().skip(1) {
        if s >= 0 {
            out.push(Ratio::from_integer(sum));
        } else {
            let den = (n as u128).checked_pow(t).ok_or_else(|| overflow(n))?;
            out.push(Ratio::new(sum, den));
        }
    }
    Ok(out)
}

/// Segmented floating sieve. Each segment adds `d^s` for ascending `d`, so
/// merged segments are bit-identical to a single pass.
fn float_sieve(n_max: usize, s: f64) -> Vec<f64> {
    let powers: Vec<f64> = (0..=n_max).map(|d| (d as f64).powf(s)).collect();
    let mut out = vec![0.0; n_max + 1];
    out[1..]
        .par_chunks_mut(SEGMENT_LEN)
        .enumerate()
        .for_each(|(seg, chunk)| {
            let lo = 1 + seg * SEGMENT_LEN;
            sieve_segment(lo, chunk, &powers);
        });
    out
}

pub(crate) fn sieve_segment(lo: usize, chunk: &mut [f64], powers: &[f64]) {
    let hi = lo + chunk.len() - 1;
    for (d, &p) in powers.iter().enumerate().take(hi + 1).skip(1) {
        let first = lo.div_ceil(d) * d;
        for m in (first..=hi).step_by(d) {
            chunk[m - lo] += p;
        }
    }
}

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Domain("divisors of 0 are undefined".into()));
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

pub fn divisor_count(n: u64) -> Result<u64> {
    Ok(factorize(n)?
        .iter()
        .map(|&(_, e)| u64::from(e) + 1)
        .product())
}

/// `sigma_{-1}(n) = sigma_1(n) / n`, exactly, for a single `n`.
pub fn sigma_minus1(n: u64) -> Result<Ratio<u128>> {
    let mut sigma = 1u128;
    for (p, e) in factorize(n)? {
        let p = p as u128;
        let pe1 = p.checked_pow(e + 1).ok_or_else(|| overflow(n as usize))?;
        sigma = sigma
            .checked_mul((pe1 - 1) / (p - 1))
            .ok_or_else(|| overflow(n as usize))?;
    }
    Ok(Ratio::new(sigma, n as u128))
}

pub fn sigma_minus1_f64(n: u64) -> Result<f64> {
    sigma_minus1(n).map(|r| ratio_to_f64(&r))
}

/// `(d, m/d, n/d)` with `d = gcd(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdReduction {
    pub d: u64,
    pub m: u64,
    pub n: u64,
}

pub fn gcd_reduce(m: u64, n: u64) -> Result<GcdReduction> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!(
            "gcd_reduce needs positive arguments, got ({m}, {n})"
        )));
    }
    let d = m.gcd(&n);
    Ok(GcdReduction {
        d,
        m: m / d,
        n: n / d,
    })
}
