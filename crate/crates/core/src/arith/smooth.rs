use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of members of one smooth block.
pub const DEFAULT_SMOOTH_CAP: usize = 1 << 22;

/// The first `s` primes.
pub fn first_primes(s: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(s);
    let mut candidate = 2u64;
    while primes.len() < s {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| candidate % p != 0)
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Integers in `[2^T, 2^{T+1})` whose prime factors all lie among the first
/// `s` primes, each with its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothSet {
    s: usize,
    primes: Vec<u64>,
    t: u32,
    members: Vec<u64>,
    exponents: Vec<Vec<u32>>,
}

impl SmoothSet {
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The dyadic exponent `T`.
    pub fn t(&self) -> u32 {
        self.t
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn exponent_vectors(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn enumerate_smooth_block(s: usize, t: u32) -> Result<SmoothSet> {
    enumerate_smooth_block_with_cap(s, t, DEFAULT_SMOOTH_CAP)
}

pub fn enumerate_smooth_block_with_cap(s: usize, t: u32, cap: usize) -> Result<SmoothSet> {
    if s == 0 {
        return Err(Error::Domain(
            "smooth block needs at least one prime".into(),
        ));
    }
    if t > 62 {
        return Err(Error::Range(format!("dyadic exponent {t} exceeds 62")));
    }
    let primes = first_primes(s);
    let lo = 1u64 << t;
    let hi = 1u64 << (t + 1);
    let mut found: Vec<(u64, Vec<u32>)> = Vec::new();
    let mut alpha = vec![0u32; s];
    walk(&primes, 0, 1, lo, hi, &mut alpha, &mut found, cap)?;
    found.sort_unstable_by_key(|(m, _)| *m);
    let (members, exponents) = found.into_iter().unzip();
    Ok(SmoothSet {
        s,
        primes,
        t,
        members,
        exponents,
    })
}

// Depth-first over exponent vectors; the last prime's exponent varies innermost.
#[allow(clippy::too_many_arguments)]
fn walk(
    primes: &[u64],
    idx: usize,
    value: u64,
    lo: u64,
    hi: u64,
    alpha: &mut [u32],
    out: &mut Vec<(u64, Vec<u32>)>,
    cap: usize,
) -> Result<()> {
    if idx == primes.len() {
        if value >= lo {
            if out.len() == cap {
                return Err(Error::Capacity {
                    what: "smooth block member count".into(),
                    cap: cap as u64,
                });
            }
            out.push((value, alpha.to_vec()));
        }
        return Ok(());
    }
    let p = primes[idx];
    let mut v = value;
    let mut e = 0;
    loop {
        alpha[idx] = e;
        walk(primes, idx + 1, v, lo, hi, alpha, out, cap)?;
        match v.checked_mul(p) {
            Some(next) if next < hi => {
                v = next;
                e += 1;
            }
            _ => break,
        }
    }
    alpha[idx] = 0;
    Ok(())
}

/// Result of the doubling search `#A_{T+d} <= 2 #A_T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingWitness {
    pub t: u32,
    pub count_t: usize,
    pub count_t_plus_d: usize,
}

/// Least `T <= t_max` with `#A_{T+d} <= 2 #A_T`, or `None`.
///
/// Requires `2^d <= P_s`.
pub fn find_doubling_t(s: usize, d: u32, t_max: u32) -> Result<Option<DoublingWitness>> {
    if s == 0 {
        return Err(Error::Domain("doubling search needs s >= 1".into()));
    }
    let p_s = *first_primes(s).last().expect("s >= 1");
    if d >= 63 || (1u64 << d) > p_s {
        return Err(Error::Precondition(format!(
            "2^d must not exceed P_s: d = {d}, P_s = {p_s}"
        )));
    }
    let mut counts: Vec<usize> = Vec::new();
    for t in 0..=t_max {
        while counts.len() <= (t + d) as usize {
            let tt = counts.len() as u32;
            counts.push(enumerate_smooth_block(s, tt)?.len());
        }
        let count_t = counts[t as usize];
        let count_t_plus_d = counts[(t + d) as usize];
        if count_t_plus_d <= 2 * count_t {
            return Ok(Some(DoublingWitness {
                t,
                count_t,
                count_t_plus_d,
            }));
        }
    }
    Ok(None)
}
