use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::SmoothSet;
use crate::error::{Error, Result};
use crate::spectrum::{Convention, Spectrum};

/// Orbits up to this size get an exact minimum cover.
pub const EXACT_COVER_LIMIT: usize = 20;

/// `f_T = #A^{-1/2} sum_{n in A} e_n`, a one-sided spectrum of unit norm.
pub fn build_ft(block: &SmoothSet) -> Result<Spectrum> {
    if block.is_empty() {
        return Err(Error::Domain("f_T needs a non-empty smooth block".into()));
    }
    let amp = (block.len() as f64).sqrt().recip();
    Spectrum::from_pairs(
        Convention::OneSided,
        block
            .members()
            .iter()
            .map(|&n| (n, Complex64::new(amp, 0.0))),
    )
}

/// `||f_T||^2 = #A * (#A^{-1/2})^2` in exact arithmetic.
pub fn ft_norm_sq_exact(block: &SmoothSet) -> BigRational {
    let n = BigRational::from_integer(block.len().into());
    &n * n.recip()
}

fn scatter<T, F>(pairs: &[(u64, T)], n: u64, freq_cap: u64, div: F) -> Result<BTreeMap<u64, T>>
where
    T: Clone + std::ops::AddAssign + Zero,
    F: Fn(&T) -> T,
{
    if n == 0 {
        return Err(Error::Domain("averaging needs n >= 1".into()));
    }
    let top = pairs.iter().map(|p| p.0).max().unwrap_or(0);
    if top.checked_mul(n).is_none_or(|v| v > freq_cap) {
        return Err(Error::Capacity {
            what: format!("S_{n} output frequency {n} * {top}"),
            cap: freq_cap,
        });
    }
    let scaled: Vec<(u64, T)> = pairs.iter().map(|(k, a)| (*k, div(a))).collect();
    let mut out: BTreeMap<u64, T> = BTreeMap::new();
    for j in 1..=n {
        for (nu, a) in &scaled {
            *out.entry(j * nu).or_insert_with(T::zero) += a.clone();
        }
    }
    Ok(out)
}

/// `S_n f = n^{-1} sum_{j <= n} f(j .)`, by scattering each dilate.
pub fn average_operator(f: &Spectrum, n: u64, freq_cap: u64) -> Result<Spectrum> {
    let pairs: Vec<(u64, Complex64)> = f.iter().collect();
    let nf = n as f64;
    let out = scatter(&pairs, n, freq_cap, |a| a / nf)?;
    let mut s = Spectrum::new(f.convention());
    for (k, a) in out {
        s.add(k, a);
    }
    Ok(s)
}

/// [`average_operator`] over exact rational amplitudes.
pub fn average_operator_exact(
    f: &BTreeMap<u64, BigRational>,
    n: u64,
    freq_cap: u64,
) -> Result<BTreeMap<u64, BigRational>> {
    if f.contains_key(&0) {
        return Err(Error::Model("frequency 0 is excluded".into()));
    }
    let pairs: Vec<(u64, BigRational)> = f.iter().map(|(k, v)| (*k, v.clone())).collect();
    let nr = BigRational::from_integer(n.into());
    scatter(&pairs, n, freq_cap, |a| a / &nr)
}

/// `S_n f` over an index list together with all pairwise `L^2` distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSet {
    pub indices: Vec<u64>,
    pub spectra: Vec<Spectrum>,
    pub distances: Vec<Vec<f64>>,
}

impl OrbitSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub fn orbit_distances(f: &Spectrum, indices: &[u64], freq_cap: u64) -> Result<OrbitSet> {
    let mut seen = indices.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("orbit indices must be distinct".into()));
    }
    let spectra: Vec<Spectrum> = indices
        .par_iter()
        .map(|&n| average_operator(f, n, freq_cap))
        .collect::<Result<_>>()?;
    let k = spectra.len();
    let upper: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|i| {
            (i + 1..k)
                .map(|j| spectra[i].distance(&spectra[j]))
                .collect()
        })
        .collect();
    let mut distances = vec![vec![0.0; k]; k];
    for i in 0..k {
        for (off, &d) in upper[i].iter().enumerate() {
            distances[i][i + 1 + off] = d;
            distances[i + 1 + off][i] = d;
        }
    }
    Ok(OrbitSet {
        indices: indices.to_vec(),
        spectra,
        distances,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub eps: f64,
    pub count: usize,
    /// Positions of the chosen centres in the orbit.
    pub centers: Vec<usize>,
    /// `false` when the orbit is too large for the exact search and `count`
    /// is a greedy upper bound.
    pub exact: bool,
}

/// Minimal number of open `eps`-balls centred at orbit points that cover the
/// orbit.
pub fn entropy_number(orbit: &OrbitSet, eps: f64) -> Result<EntropyResult> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {eps}")));
    }
    let k = orbit.len();
    if k == 0 {
        return Ok(EntropyResult {
            eps,
            count: 0,
            centers: vec![],
            exact: true,
        });
    }
    let covers: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| orbit.distances[i][j] < eps).collect())
        .collect();
    if k <= EXACT_COVER_LIMIT {
        let masks: Vec<u32> = covers
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(0u32, |m, (j, &c)| if c { m | 1 << j } else { m })
            })
            .collect();
        let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        for size in 1..=k {
            let mut chosen = Vec::with_capacity(size);
            if cover_search(&masks, full, 0, size, &mut chosen) {
                return Ok(EntropyResult {
                    eps,
                    count: size,
                    centers: chosen,
                    exact: true,
                });
            }
        }
        unreachable!("every point covers itself");
    }
    let mut covered = vec![false; k];
    let mut centers = Vec::new();
    while covered.iter().any(|c| !c) {
        let best = (0..k)
            .max_by_key(|&i| (0..k).filter(|&j| covers[i][j] && !covered[j]).count())
            .expect("k > 0");
        for j in 0..k {
            covered[j] |= covers[best][j];
        }
        centers.push(best);
    }
    Ok(EntropyResult {
        eps,
        count: centers.len(),
        centers,
        exact: false,
    })
}

/// Branches on the centres covering the lowest uncovered point.
fn cover_search(
    masks: &[u32],
    full: u32,
    covered: u32,
    left: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if covered == full {
        return true;
    }
    if left == 0 {
        return false;
    }
    let target = (!covered & full).trailing_zeros();
    for (i, &m) in masks.iter().enumerate() {
        if m >> target & 1 == 1 {
            chosen.push(i);
            if cover_search(masks, full, covered | m, left - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::enumerate_smooth_block;
    use crate::spectrum::DEFAULT_FREQ_CAP;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ft_examples() {
        let f = build_ft(&enumerate_smooth_block(1, 3).unwrap()).unwrap();
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![(8, c(1.0))]);
        let b = enumerate_smooth_block(2, 3).unwrap();
        let f = build_ft(&b).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.get(9), c(3f64.sqrt().recip()));
        assert!((f.norm_sq() - 1.0).abs() < 4.0 * f64::EPSILON);
        assert_eq!(ft_norm_sq_exact(&b), BigRational::from_integer(1.into()));
    }

    #[test]
    fn averaging_examples() {
        let f = Spectrum::from_pairs(Convention::OneSided, [(1, c(1.0))]).unwrap();
        assert_eq!(average_operator(&f, 1, 100).unwrap(), f);
        let s2 = average_operator(&f, 2, 100).unwrap();
        assert_eq!(s2.get(1), c(0.5));
        assert_eq!(s2.get(2), c(0.5));
        let g = Spectrum::from_pairs(Convention::OneSided, [(2, c(0.8)), (3, c(-0.4))]).unwrap();
        let s = average_operator(&g, 2, 100).unwrap();
        assert_eq!(s.get(2), c(0.4));
        assert_eq!(s.get(3), c(-0.2));
        assert_eq!(s.get(4), c(0.4));
        assert_eq!(s.get(6), c(-0.2));
        assert_eq!(s.len(), 4);
        assert!(matches!(
            average_operator(&g, 40, 100),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn orbit_and_entropy_examples() {
        let f = Spectrum::from_pairs(Convention::OneSided, [(1, c(1.0))]).unwrap();
        assert!(orbit_distances(&f, &[1, 1], DEFAULT_FREQ_CAP).is_err());
        let o = orbit_distances(&f, &[1, 2], DEFAULT_FREQ_CAP).unwrap();
        assert!((o.distances[0][1].powi(2) - 0.5).abs() < 1e-15);
        assert_eq!(o.distances[1][1], 0.0);
        assert_eq!(entropy_number(&o, 0.125).unwrap().count, 2);
        assert_eq!(entropy_number(&o, 10.0).unwrap().count, 1);
        let one = orbit_distances(&f, &[3], DEFAULT_FREQ_CAP).unwrap();
        assert_eq!(entropy_number(&one, 1e-9).unwrap().count, 1);
        assert!(entropy_number(&one, 0.0).is_err());
    }
}
