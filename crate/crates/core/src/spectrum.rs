//! Sparse trigonometric polynomials.
//!
//! A [`Spectrum`] maps positive frequencies to complex amplitudes. Under the
//! [`Convention::Real`] convention the function is real valued and the
//! negative frequencies are implied by conjugate symmetry, so
//! `f(x) = 2 Re sum a_nu e(nu x)` and `||f||^2 = 2 sum |a_nu|^2`. Under
//! [`Convention::OneSided`] the function is `sum a_nu e(nu x)` itself and
//! `||f||^2 = sum |a_nu|^2`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the largest frequency an assembled spectrum may carry.
pub const DEFAULT_FREQ_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Real function; negative frequencies carry conjugate amplitudes.
    Real,
    /// Complex function supported on positive frequencies only.
    OneSided,
}

impl Convention {
    fn norm_factor(self) -> f64 {
        match self {
            Convention::Real => 2.0,
            Convention::OneSided => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    convention: Convention,
    #[serde(with = "amp_list")]
    amps: BTreeMap<u64, Complex64>,
}

impl Spectrum {
    pub fn new(convention: Convention) -> Self {
        Self {
            convention,
            amps: BTreeMap::new(),
        }
    }

    pub fn real() -> Self {
        Self::new(Convention::Real)
    }

    pub fn one_sided() -> Self {
        Self::new(Convention::OneSided)
    }

    /// Builds a spectrum from `(frequency, amplitude)` pairs; repeated
    /// frequencies accumulate.
    pub fn from_pairs<I>(convention: Convention, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        let mut s = Self::new(convention);
        for (nu, a) in pairs {
            s.try_add(nu, a)?;
        }
        Ok(s)
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Adds `a` at frequency `nu`; rejects the zero frequency and non-finite
    /// amplitudes.
    pub fn try_add(&mut self, nu: u64, a: Complex64) -> Result<()> {
        if nu == 0 {
            return Err(Error::Model(
                "frequency 0 is excluded (mean-zero function)".into(),
            ));
        }
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::Model(format!(
                "non-finite amplitude at frequency {nu}"
            )));
        }
        self.add(nu, a);
        Ok(())
    }

    pub(crate) fn add(&mut self, nu: u64, a: Complex64) {
        debug_assert!(nu > 0);
        *self.amps.entry(nu).or_insert(Complex64::new(0.0, 0.0)) += a;
    }

    pub fn get(&self, nu: u64) -> Complex64 {
        self.amps.get(&nu).copied().unwrap_or_default()
    }

    /// Entries in ascending frequency order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amps.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn max_frequency(&self) -> u64 {
        self.amps.keys().next_back().copied().unwrap_or(0)
    }

    /// Squared L2 norm on the circle, by Parseval.
    pub fn norm_sq(&self) -> f64 {
        self.convention.norm_factor() * self.amps.values().map(|a| a.norm_sqr()).sum::<f64>()
    }

    /// `T_j f (x) = f(jx)`: every frequency is multiplied by `j`.
    pub fn dilate(&self, j: u64) -> Result<Self> {
        if j == 0 {
            return Err(Error::Domain("dilation by 0".into()));
        }
        let mut amps = BTreeMap::new();
        for (&nu, &a) in &self.amps {
            let mu = nu
                .checked_mul(j)
                .ok_or_else(|| Error::Range(format!("frequency {nu} * {j} overflows")))?;
            amps.insert(mu, a);
        }
        Ok(Self {
            convention: self.convention,
            amps,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            convention: self.convention,
            amps: self.amps.iter().map(|(&k, &a)| (k, a * factor)).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Spectrum, factor: f64) {
        for (&nu, &a) in &other.amps {
            self.add(nu, a * factor);
        }
    }

    pub fn difference(&self, other: &Spectrum) -> Self {
        let mut d = self.clone();
        d.add_scaled(other, -1.0);
        d
    }

    /// L2 distance `||self - other||`, by Parseval on the difference.
    pub fn distance(&self, other: &Spectrum) -> f64 {
        self.difference(other).norm_sq().sqrt()
    }

    /// Largest absolute amplitude difference against `other`.
    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.difference(other)
            .amps
            .values()
            .map(|a| a.norm())
            .fold(0.0, f64::max)
    }

    pub fn check_cap(&self, cap: u64) -> Result<()> {
        if self.max_frequency() > cap {
            return Err(Error::Capacity {
                what: format!("spectrum max frequency {}", self.max_frequency()),
                cap,
            });
        }
        Ok(())
    }
}

mod amp_list {
    use std::collections::BTreeMap;

    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        amps: &BTreeMap<u64, Complex64>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        let v: Vec<(u64, f64, f64)> = amps.iter().map(|(&k, a)| (k, a.re, a.im)).collect();
        v.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<u64, Complex64>, D::Error> {
        let v: Vec<(u64, f64, f64)> = Vec::deserialize(de)?;
        Ok(v.into_iter()
            .map(|(k, re, im)| (k, Complex64::new(re, im)))
            .collect())
    }
}
