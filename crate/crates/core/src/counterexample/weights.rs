use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::sigma_minus1;
use crate::coeff::loglog_weight;
use crate::error::{Error, Result};
use crate::numeric::dyadic_checkpoints;

/// Serializable weight families `w(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightDescriptor {
    /// `sigma_{-1}(n)^exponent`
    SigmaMinus1Pow {
        exponent: f64,
    },
    /// `log log n`, zero for `n < 16`.
    LogLog,
    Constant {
        value: f64,
    },
    /// `w(1), w(2), ...`; indices past the end are an error.
    Table {
        values: Vec<f64>,
    },
}

impl FromStr for WeightDescriptor {
    type Err = Error;

    /// `sigma`, `sigma:<e>`, `loglog`, `constant`, `constant:<c>`,
    /// `table:<w1>,<w2>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let num = |a: &str| {
            a.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{a}` in weight `{s}`")))
        };
        match (head, arg) {
            ("sigma", None) => Ok(Self::SigmaMinus1Pow { exponent: 1.0 }),
            ("sigma", Some(a)) => Ok(Self::SigmaMinus1Pow { exponent: num(a)? }),
            ("loglog", None) => Ok(Self::LogLog),
            ("constant", None) => Ok(Self::Constant { value: 1.0 }),
            ("constant", Some(a)) => Ok(Self::Constant { value: num(a)? }),
            ("table", Some(a)) => Ok(Self::Table {
                values: a.split(',').map(|v| num(v.trim())).collect::<Result<_>>()?,
            }),
            _ => Err(Error::Parse(format!("unknown weight family `{s}`"))),
        }
    }
}

#[derive(Clone)]
enum Inner {
    Described(WeightDescriptor),
    Custom(String, Arc<dyn Fn(u64) -> f64 + Send + Sync>),
}

/// A weight sequence `w(n) >= 0`.
#[derive(Clone)]
pub struct WeightFamily {
    inner: Inner,
}

impl fmt::Debug for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner {
            Inner::Described(d) => write!(f, "WeightFamily({d:?})"),
            Inner::Custom(name, _) => write!(f, "WeightFamily(custom {name})"),
        }
    }
}

impl WeightFamily {
    pub fn new(d: WeightDescriptor) -> Result<Self> {
        match &d {
            WeightDescriptor::SigmaMinus1Pow { exponent } if !exponent.is_finite() => {
                return Err(Error::Model("weight exponent must be finite".into()))
            }
            WeightDescriptor::Constant { value } if !(value.is_finite() && *value >= 0.0) => {
                return Err(Error::Model(
                    "constant weight must be finite and >= 0".into(),
                ))
            }
            WeightDescriptor::Table { values }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) =>
            {
                return Err(Error::Model(
                    "weight table entries must be finite and >= 0".into(),
                ))
            }
            _ => {}
        }
        Ok(Self {
            inner: Inner::Described(d),
        })
    }

    pub fn custom(name: impl Into<String>, w: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            inner: Inner::Custom(name.into(), Arc::new(w)),
        }
    }

    pub fn descriptor(&self) -> Option<&WeightDescriptor> {
        match &self.inner {
            Inner::Described(d) => Some(d),
            Inner::Custom(..) => None,
        }
    }

    /// Largest `n` the family is defined for.
    pub fn domain_limit(&self) -> Option<u64> {
        match &self.inner {
            Inner::Described(WeightDescriptor::Table { values }) => Some(values.len() as u64),
            _ => None,
        }
    }

    pub fn try_eval(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("weights are indexed from 1".into()));
        }
        Ok(match &self.inner {
            Inner::Described(d) => match d {
                WeightDescriptor::SigmaMinus1Pow { exponent } => {
                    let s = sigma_minus1(n)?;
                    let sf = *s.numer() as f64 / *s.denom() as f64;
                    if *exponent == 1.0 {
                        sf
                    } else {
                        sf.powf(*exponent)
                    }
                }
                WeightDescriptor::LogLog => loglog_weight(n),
                WeightDescriptor::Constant { value } => *value,
                WeightDescriptor::Table { values } => {
                    *values.get(n as usize - 1).ok_or_else(|| {
                        Error::Range(format!(
                            "weight table has {} entries, asked for w({n})",
                            values.len()
                        ))
                    })?
                }
            },
            Inner::Custom(_, f) => f(n),
        })
    }

    /// `w(n)` as an exact rational, when the family is rational-valued.
    pub fn exact(&self, n: u64) -> Option<BigRational> {
        let Inner::Described(d) = &self.inner else {
            return None;
        };
        match d {
            WeightDescriptor::SigmaMinus1Pow { exponent } if *exponent == 0.0 => {
                Some(BigRational::one())
            }
            WeightDescriptor::SigmaMinus1Pow { exponent } if *exponent == 1.0 => {
                let s = sigma_minus1(n).ok()?;
                Some(BigRational::new(
                    BigInt::from(*s.numer()),
                    BigInt::from(*s.denom()),
                ))
            }
            WeightDescriptor::Constant { value } => BigRational::from_float(*value),
            WeightDescriptor::Table { values } => {
                BigRational::from_float(*values.get(n as usize - 1)?)
            }
            _ => None,
        }
    }

    /// Decides `w(nm) <= w(n) w(m)`. Powers of `sigma_{-1}` are compared
    /// through exact `sigma_{-1}` values and monotonicity of `x^e`.
    fn submultiplicative_at(&self, n: u64, m: u64) -> Result<bool> {
        if let Inner::Described(WeightDescriptor::SigmaMinus1Pow { exponent }) = &self.inner {
            let to_big = |r: num_rational::Ratio<u128>| {
                BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            };
            let lhs = to_big(sigma_minus1(n * m)?);
            let rhs = to_big(sigma_minus1(n)?) * to_big(sigma_minus1(m)?);
            return Ok(match exponent.partial_cmp(&0.0) {
                Some(std::cmp::Ordering::Greater) => lhs <= rhs,
                Some(std::cmp::Ordering::Less) => lhs >= rhs,
                _ => true,
            });
        }
        Ok(self.try_eval(n * m)? <= self.try_eval(n)? * self.try_eval(m)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub range: u64,
    pub pairs_checked: u64,
    pub budget_exhausted: bool,
    pub submultiplicative: bool,
    pub first_violation: Option<(u64, u64)>,
    /// `(N, N^{-1} sum_{n <= N} w(n))` at dyadic checkpoints.
    pub cesaro_means: Vec<(u64, f64)>,
    /// `(N, max_{n <= N} w(n) / log log N)` at dyadic checkpoints `N >= 16`.
    pub loglog_ratios: Vec<(u64, f64)>,
    /// The last ratio is below the one at the middle checkpoint. Finite-range
    /// trend only.
    pub little_o_trend: bool,
}

/// Exhaustive sub-multiplicativity over coprime `n, m >= 2` with `nm <= N`
/// (at most `budget` pairs), Cesaro means and the `log log` growth trace.
pub fn check_weight_properties(w: &WeightFamily, range: u64, budget: u64) -> Result<WeightReport> {
    if range == 0 {
        return Err(Error::Domain("weight check needs N >= 1".into()));
    }
    if let Some(lim) = w.domain_limit() {
        if range > lim {
            return Err(Error::Range(format!(
                "weight table covers 1..={lim}, N = {range}"
            )));
        }
    }
    let mut pairs_checked = 0u64;
    let mut budget_exhausted = false;
    let mut first_violation = None;
    'outer: for n in 2..=range {
        for m in n + 1..=range / n {
            if n.gcd(&m) != 1 {
                continue;
            }
            if pairs_checked == budget {
                budget_exhausted = true;
                break 'outer;
            }
            pairs_checked += 1;
            if first_violation.is_none() && !w.submultiplicative_at(n, m)? {
                first_violation = Some((n, m));
            }
        }
    }
    let marks = dyadic_checkpoints(range);
    let mut cesaro_means = Vec::new();
    let mut loglog_ratios = Vec::new();
    let mut next = marks.iter().peekable();
    let (mut sum, mut best) = (0.0, 0.0f64);
    for n in 1..=range {
        let v = w.try_eval(n)?;
        if !(v >= 0.0) {
            return Err(Error::Model(format!("w({n}) = {v} is negative")));
        }
        sum += v;
        best = best.max(v);
        if next.peek() == Some(&&n) {
            next.next();
            cesaro_means.push((n, sum / n as f64));
            if n >= 16 {
                loglog_ratios.push((n, best / loglog_weight(n)));
            }
        }
    }
    let little_o_trend = match loglog_ratios.len() {
        0 | 1 => false,
        k => loglog_ratios[k - 1].1 < loglog_ratios[(k - 1) / 2].1,
    };
    Ok(WeightReport {
        range,
        pairs_checked,
        budget_exhausted,
        submultiplicative: first_violation.is_none(),
        first_violation,
        cesaro_means,
        loglog_ratios,
        little_o_trend,
    })
}

impl WeightFamily {
    /// `sum_{j <= J} sum_{m in ms} w(mj)`, exactly when possible.
    pub(crate) fn double_sum(&self, ms: &[u64], j_max: u64) -> Result<(f64, Option<BigRational>)> {
        let mut exact = Some(BigRational::zero());
        let mut float = 0.0;
        for j in 1..=j_max {
            for &m in ms {
                let k = m
                    .checked_mul(j)
                    .ok_or_else(|| Error::Range(format!("index {m} * {j} overflows")))?;
                float += self.try_eval(k)?;
                if let Some(acc) = exact.as_mut() {
                    match self.exact(k) {
                        Some(v) => *acc += v,
                        None => exact = None,
                    }
                }
            }
        }
        Ok((float, exact))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_weights() {
        assert_eq!(
            "sigma:0.5".parse::<WeightDescriptor>().unwrap(),
            WeightDescriptor::SigmaMinus1Pow { exponent: 0.5 }
        );
        assert_eq!(
            "loglog".parse::<WeightDescriptor>().unwrap(),
            WeightDescriptor::LogLog
        );
        assert_eq!(
            "table:1,2.5".parse::<WeightDescriptor>().unwrap(),
            WeightDescriptor::Table {
                values: vec![1.0, 2.5]
            }
        );
        assert!("cubic".parse::<WeightDescriptor>().is_err());
    }

    #[test]
    fn sqrt_sigma_is_submultiplicative() {
        let w = WeightFamily::new(WeightDescriptor::SigmaMinus1Pow { exponent: 0.5 }).unwrap();
        let r = check_weight_properties(&w, 10_000, u64::MAX).unwrap();
        assert!(r.submultiplicative);
        assert!(!r.budget_exhausted);
        assert!(r.pairs_checked > 1000);
    }

    #[test]
    fn constant_and_linear_weights() {
        let one = WeightFamily::new(WeightDescriptor::Constant { value: 1.0 }).unwrap();
        let r = check_weight_properties(&one, 4096, u64::MAX).unwrap();
        assert!(r.submultiplicative && r.little_o_trend);
        assert!(r.cesaro_means.iter().all(|&(_, m)| m == 1.0));
        let lin = WeightFamily::custom("n", |n| n as f64);
        let r = check_weight_properties(&lin, 4096, u64::MAX).unwrap();
        assert!(!r.little_o_trend);
    }

    #[test]
    fn budget_is_respected() {
        let one = WeightFamily::new(WeightDescriptor::Constant { value: 1.0 }).unwrap();
        let r = check_weight_properties(&one, 1000, 10).unwrap();
        assert_eq!(r.pairs_checked, 10);
        assert!(r.budget_exhausted);
    }

    #[test]
    fn exact_values() {
        let w = WeightFamily::new(WeightDescriptor::SigmaMinus1Pow { exponent: 1.0 }).unwrap();
        assert_eq!(w.exact(16).unwrap(), BigRational::new(31.into(), 16.into()));
        let (f, e) = w.double_sum(&[8], 2).unwrap();
        assert_eq!(e.unwrap(), BigRational::new(61.into(), 16.into()));
        assert_eq!(f, 61.0 / 16.0);
    }
}
