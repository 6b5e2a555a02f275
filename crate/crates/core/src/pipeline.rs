//! Fixed-cutoff fit with Monte Carlo p-value, and the scan over cutoffs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{fit_beta, MleConfig};
use crate::gof::{ks_statistic, p_value, PValue};
use crate::model::{IntegerSample, PowerLawModel};
use crate::sample::{sample_n, RngStream, SamplerParams};

/// Attempts per replica before giving up on refitting it.
const MAX_REPLICA_ATTEMPTS: u64 = 1000;

/// Fraction of failed replica refits above which a fit is flagged.
const UNRELIABLE_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub n_sim: u64,
    pub seed: u64,
    pub mle: MleConfig,
}

impl FitConfig {
    pub fn new(n_sim: u64, seed: u64) -> Self {
        FitConfig {
            n_sim,
            seed,
            mle: MleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitAtA {
    pub a: u64,
    pub n_a: u64,
    pub beta_emp: f64,
    pub sigma: f64,
    pub loglik: f64,
    pub d_emp: f64,
    pub p: PValue,
    /// Replica refits that failed and were regenerated.
    pub failed_replicas: u64,
    pub unreliable: bool,
    /// KS distance of every replica, by replica index.
    #[serde(skip)]
    pub d_sims: Vec<f64>,
}

/// Key of the replica streams at cutoff `a`.
pub fn replica_key(seed: u64, a: u64) -> u64 {
    splitmix64(seed ^ splitmix64(a))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fits β at cutoff `a` and computes its Monte Carlo p-value with `n_sim` replicas.
pub fn fit_at_a(sample: &IntegerSample, a: u64, n_sim: u64, seed: u64) -> Result<FitAtA> {
    fit_at_a_with(sample, a, &FitConfig::new(n_sim, seed))
}

pub fn fit_at_a_with(sample: &IntegerSample, a: u64, config: &FitConfig) -> Result<FitAtA> {
    if config.n_sim == 0 {
        return Err(Error::Config("n_sim must be >= 1".into()));
    }
    let tail = sample.truncate(a)?;
    let stat = tail.sufficient_stat(a)?;
    let fit = fit_beta(&stat, a, &config.mle)?;
    let model = PowerLawModel::new(a, fit.beta_emp)?;
    let d_emp = ks_statistic(&tail, &model)?.d;

    let params = SamplerParams::new(a, fit.beta_emp)?;
    let key = replica_key(config.seed, a);
    let replicas = (0..config.n_sim)
        .into_par_iter()
        .map(|i| run_replica(&params, stat.n_a, key, i, &config.mle))
        .collect::<Result<Vec<_>>>()?;

    let failed_replicas: u64 = replicas.iter().map(|r| r.1).sum();
    let d_sims: Vec<f64> = replicas.into_iter().map(|r| r.0).collect();
    let p = p_value(d_emp, &d_sims)?;
    Ok(FitAtA {
        a,
        n_a: stat.n_a,
        beta_emp: fit.beta_emp,
        sigma: fit.sigma,
        loglik: fit.loglik_at_max,
        d_emp,
        p,
        failed_replicas,
        unreliable: failed_replicas as f64 > UNRELIABLE_FRACTION * config.n_sim as f64,
        d_sims,
    })
}

/// Simulates one replica, refits it, and returns its KS distance against its own fit,
/// plus the number of regenerated attempts.
fn run_replica(
    params: &SamplerParams,
    n_a: u64,
    key: u64,
    index: u64,
    mle: &MleConfig,
) -> Result<(f64, u64)> {
    let a = params.a();
    for attempt in 0..MAX_REPLICA_ATTEMPTS {
        let mut rng = RngStream::new(key, index | (attempt << 32));
        let sim = sample_n(params, n_a, &mut rng)?;
        let stat = sim.sufficient_stat(a)?;
        match fit_beta(&stat, a, mle) {
            Ok(fit) => {
                let model = PowerLawModel::new(a, fit.beta_emp)?;
                return Ok((ks_statistic(&sim, &model)?.d, attempt));
            }
            Err(Error::Degenerate { .. }) | Err(Error::NonConvergence(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NonConvergence(format!(
        "replica {index} at a = {a} could not be refit in {MAX_REPLICA_ATTEMPTS} attempts"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Cutoffs to test; `None` tests every distinct sample value while `n_a >= min_tail`.
    pub a_values: Option<Vec<u64>>,
    pub min_tail: u64,
    pub n_sim: u64,
    pub p_threshold: f64,
    pub seed: u64,
    pub mle: MleConfig,
    /// Stop at the first cutoff that qualifies instead of fitting every cutoff.
    pub stop_at_first: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            a_values: None,
            min_tail: 10,
            n_sim: 1000,
            p_threshold: 0.20,
            seed: 0,
            mle: MleConfig::default(),
            stop_at_first: false,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sim < 100 {
            return Err(Error::Config(format!(
                "n_sim must be >= 100, got {}",
                self.n_sim
            )));
        }
        if !(self.p_threshold > 0.0 && self.p_threshold < 1.0) {
            return Err(Error::Config(format!(
                "p threshold must lie in (0, 1), got {}",
                self.p_threshold
            )));
        }
        if let Some(v) = &self.a_values {
            if v.contains(&0) {
                return Err(Error::Config("cutoffs must be >= 1".into()));
            }
        }
        self.mle.validate()
    }

    /// Cutoffs that will be tested on `sample`.
    pub fn cutoffs(&self, sample: &IntegerSample) -> Vec<u64> {
        match &self.a_values {
            Some(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
            None => sample
                .distinct_values()
                .take_while(|&a| sample.survival_count(a) >= self.min_tail)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCutoff {
    pub a: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub fits: Vec<FitAtA>,
    pub skipped: Vec<SkippedCutoff>,
    pub p_threshold: f64,
    pub a_star: Option<u64>,
    pub beta_star: Option<f64>,
    pub sigma_star: Option<f64>,
}

impl ScanResult {
    pub fn selected(&self) -> Option<&FitAtA> {
        let a = self.a_star?;
        self.fits.iter().find(|f| f.a == a)
    }
}

/// Fits every cutoff and selects a* = min{a : p > threshold}.
pub fn scan(sample: &IntegerSample, config: &ScanConfig) -> Result<ScanResult> {
    config.validate()?;
    if sample.is_empty() {
        return Err(Error::EmptyInput);
    }
    let fit_config = FitConfig {
        n_sim: config.n_sim,
        seed: config.seed,
        mle: config.mle,
    };
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    let mut a_star = None;
    for a in config.cutoffs(sample) {
        let n_a = sample.survival_count(a);
        if n_a < 2 {
            skipped.push(SkippedCutoff {
                a,
                reason: format!("tail has {n_a} data, need at least 2"),
            });
            continue;
        }
        match fit_at_a_with(sample, a, &fit_config) {
            Ok(fit) => {
                let qualifies = fit.p.p > config.p_threshold;
                fits.push(fit);
                if qualifies && a_star.is_none() {
                    a_star = Some(a);
                    if config.stop_at_first {
                        break;
                    }
                }
            }
            Err(e) => skipped.push(SkippedCutoff {
                a,
                reason: e.to_string(),
            }),
        }
    }
    let chosen = a_star.and_then(|a| fits.iter().find(|f| f.a == a));
    Ok(ScanResult {
        p_threshold: config.p_threshold,
        a_star,
        beta_star: chosen.map(|f| f.beta_emp),
        sigma_star: chosen.map(|f| f.sigma),
        fits,
        skipped,
    })
}
