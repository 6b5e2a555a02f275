//! Kolmogorov–Smirnov distance against a fitted power law and Monte Carlo p-values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{IntegerSample, PowerLawModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d: f64,
    /// Smallest n at which the maximum deviation is attained.
    pub argmax_n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PValue {
    pub p: f64,
    pub sigma_p: f64,
    pub n_sim: u64,
    pub n_exceed: u64,
}

impl PValue {
    pub fn from_counts(n_exceed: u64, n_sim: u64) -> Self {
        let p = n_exceed as f64 / n_sim as f64;
        PValue {
            p,
            sigma_p: (p * (1.0 - p) / n_sim as f64).sqrt(),
            n_sim,
            n_exceed,
        }
    }
}

/// sup_{n >= a} |N_n/N_a − S(n)|.
///
/// Both functions are constant on every real interval (m, m+1], so only integers matter,
/// and between consecutive observed values the empirical side is flat while S decreases.
/// The supremum is therefore attained at `a`, at an observed value `v`, or at `v + 1`.
pub fn ks_statistic(sample: &IntegerSample, model: &PowerLawModel) -> Result<KsResult> {
    let a = model.a();
    let min = sample.min().ok_or(Error::EmptyTail { a })?;
    if min < a {
        return Err(Error::Mismatch { a, value: min });
    }
    let n_a = sample.len() as f64;

    let mut points: Vec<u64> = Vec::with_capacity(2 * sample.counts().len() + 1);
    points.push(a);
    for v in sample.distinct_values() {
        points.push(v);
        points.push(v + 1);
    }
    points.sort_unstable();
    points.dedup();

    let mut best = KsResult {
        d: -1.0,
        argmax_n: a,
    };
    for n in points {
        let emp = sample.survival_count(n) as f64 / n_a;
        let dev = (emp - model.survival(n)?).abs();
        if dev > best.d {
            best = KsResult {
                d: dev,
                argmax_n: n,
            };
        }
    }
    Ok(best)
}

/// Fraction of simulated distances strictly greater than `d_emp`.
pub fn p_value(d_emp: f64, d_sims: &[f64]) -> Result<PValue> {
    if d_sims.is_empty() {
        return Err(Error::Config(
            "p-value needs at least one simulation".into(),
        ));
    }
    let n_exceed = d_sims.iter().filter(|&&d| d > d_emp).count() as u64;
    Ok(PValue::from_counts(n_exceed, d_sims.len() as u64))
}
