//! The discrete power law on n = a, a+1, …
//!
//! ```text
//! f(n) = 1 / (ζ(β+1, a) n^{β+1})
//! S(n) = ζ(β+1, n) / ζ(β+1, a)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::hurwitz_zeta;

/// A multiset of positive integers, stored as sorted `(value, multiplicity)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntegerSample {
    counts: Vec<(u64, u64)>,
    /// `tail[i]` is the number of data >= `counts[i].0`.
    tail: Vec<u64>,
}

impl IntegerSample {
    /// Builds a sample from raw values. Zeros are rejected.
    pub fn from_values<I: IntoIterator<Item = u64>>(values: I) -> Result<Self> {
        let mut v: Vec<u64> = values.into_iter().collect();
        if v.contains(&0) {
            return Err(Error::Domain("sample values must be >= 1".into()));
        }
        v.sort_unstable();
        let mut counts: Vec<(u64, u64)> = Vec::new();
        for x in v {
            match counts.last_mut() {
                Some((val, c)) if *val == x => *c += 1,
                _ => counts.push((x, 1)),
            }
        }
        Ok(Self::from_sorted_counts(counts))
    }

    /// Builds a sample from `(value, count)` pairs in any order; repeated values are merged.
    pub fn from_counts<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut pairs: Vec<(u64, u64)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        if pairs.iter().any(|p| p.0 == 0) {
            return Err(Error::Domain("sample values must be >= 1".into()));
        }
        pairs.sort_unstable();
        let mut counts: Vec<(u64, u64)> = Vec::with_capacity(pairs.len());
        for (x, c) in pairs {
            match counts.last_mut() {
                Some((val, n)) if *val == x => *n += c,
                _ => counts.push((x, c)),
            }
        }
        Ok(Self::from_sorted_counts(counts))
    }

    fn from_sorted_counts(counts: Vec<(u64, u64)>) -> Self {
        let mut tail = vec![0; counts.len()];
        let mut acc = 0;
        for (i, &(_, c)) in counts.iter().enumerate().rev() {
            acc += c;
            tail[i] = acc;
        }
        IntegerSample { counts, tail }
    }

    /// Total number of data, counting multiplicity.
    pub fn len(&self) -> u64 {
        self.tail.first().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sorted distinct values with their multiplicities.
    pub fn counts(&self) -> &[(u64, u64)] {
        &self.counts
    }

    pub fn distinct_values(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.iter().map(|p| p.0)
    }

    /// All values in ascending order, repeated by multiplicity.
    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts
            .iter()
            .flat_map(|&(v, c)| std::iter::repeat_n(v, c as usize))
    }

    pub fn min(&self) -> Option<u64> {
        self.counts.first().map(|p| p.0)
    }

    pub fn max(&self) -> Option<u64> {
        self.counts.last().map(|p| p.0)
    }

    /// N_n, the number of data >= n.
    pub fn survival_count(&self, n: u64) -> u64 {
        let i = self.counts.partition_point(|p| p.0 < n);
        self.tail.get(i).copied().unwrap_or(0)
    }

    /// Keeps only the values >= a.
    pub fn truncate(&self, a: u64) -> Result<IntegerSample> {
        if a < 1 {
            return Err(Error::Domain("cutoff a must be >= 1".into()));
        }
        let i = self.counts.partition_point(|p| p.0 < a);
        if i == self.counts.len() {
            return Err(Error::EmptyTail { a });
        }
        Ok(IntegerSample {
            counts: self.counts[i..].to_vec(),
            tail: self.tail[i..].to_vec(),
        })
    }

    /// Sufficient statistic of the likelihood at cutoff `a`. The sample must already be
    /// truncated at `a`.
    pub fn sufficient_stat(&self, a: u64) -> Result<SufficientStat> {
        match self.min() {
            None => Err(Error::EmptyTail { a }),
            Some(m) if m < a => Err(Error::Mismatch { a, value: m }),
            Some(_) => {
                let n_a = self.len();
                let log_sum: f64 = self
                    .counts
                    .iter()
                    .map(|&(v, c)| c as f64 * (v as f64).ln())
                    .sum();
                Ok(SufficientStat {
                    n_a,
                    log_geo_mean: log_sum / n_a as f64,
                })
            }
        }
    }
}

/// N_a and ln G_a, the only data summaries the likelihood depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientStat {
    pub n_a: u64,
    pub log_geo_mean: f64,
}

/// Discrete power law with lower cutoff `a` and exponent `beta` (mass ∝ n^{-(β+1)}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawModel {
    a: u64,
    beta: f64,
    zeta_norm: f64,
}

impl PowerLawModel {
    pub fn new(a: u64, beta: f64) -> Result<Self> {
        if a < 1 {
            return Err(Error::Domain("cutoff a must be >= 1".into()));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!(
                "beta must be finite and > 0, got {beta}"
            )));
        }
        let zeta_norm = hurwitz_zeta(beta + 1.0, a)?;
        Ok(PowerLawModel { a, beta, zeta_norm })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// ζ(β+1, a).
    pub fn zeta_norm(&self) -> f64 {
        self.zeta_norm
    }

    fn check_support(&self, n: u64) -> Result<()> {
        if n < self.a {
            Err(Error::Domain(format!(
                "n = {n} is below the cutoff a = {}",
                self.a
            )))
        } else {
            Ok(())
        }
    }

    /// f(n).
    pub fn pmf(&self, n: u64) -> Result<f64> {
        self.check_support(n)?;
        Ok(1.0 / (self.zeta_norm * (n as f64).powf(self.beta + 1.0)))
    }

    /// S(n) = P[X >= n]; one zeta evaluation per call.
    pub fn survival(&self, n: u64) -> Result<f64> {
        self.check_support(n)?;
        if n == self.a {
            return Ok(1.0);
        }
        Ok(hurwitz_zeta(self.beta + 1.0, n)? / self.zeta_norm)
    }
}

/// ℓ(β) = −ln ζ(β+1, a) − (β+1) ln G_a, the mean log-likelihood per datum.
pub fn log_likelihood(stat: &SufficientStat, a: u64, beta: f64) -> Result<f64> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::Domain(format!("beta must be > 0, got {beta}")));
    }
    let z = hurwitz_zeta(beta + 1.0, a)?;
    Ok(-z.ln() - (beta + 1.0) * stat.log_geo_mean)
}

/// Standard deviation of the exponent estimate, β/√N_a.
pub fn sigma_beta(beta_emp: f64, n_a: u64) -> f64 {
    beta_emp / (n_a as f64).sqrt()
}
