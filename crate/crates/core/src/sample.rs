//! Discrete power-law variates by rejection from a zeta-free proposal.
//!
//! Proposals are `y = floor(u^{-1/β})` with `u` uniform on `(0, a^{-β}]`, which have mass
//! `q(y) = (a/y)^β − (a/(y+1))^β` on `y >= a`. A proposal is accepted when
//!
//! ```text
//! v · y · (τ − 1) / (b − a^β) <= a · τ / b,    τ = (1 + 1/y)^β,  b = (a+1)^β
//! ```
//!
//! which is `v <= f(y) q(a) / (f(a) q(y))` with the normalization cancelled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::model::IntegerSample;

/// Name of the generator, recorded in reports.
pub const RNG_ALGORITHM: &str =
    "ChaCha12 (rand_chacha 0.9), key = seed_from_u64(seed), stream = stream_id";

/// A seeded, reproducible uniform source. Each `(seed, stream_id)` pair is an independent
/// ChaCha stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerParams {
    a: u64,
    beta: f64,
    u_max: f64,
    /// (a+1)^β
    b: f64,
    /// b − a^β, computed without cancellation.
    b_minus_a_pow: f64,
}

impl SamplerParams {
    pub fn new(a: u64, beta: f64) -> Result<Self> {
        if a < 1 {
            return Err(Error::Domain("cutoff a must be >= 1".into()));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!(
                "beta must be finite and > 0, got {beta}"
            )));
        }
        let af = a as f64;
        let a_pow = af.powf(beta);
        Ok(SamplerParams {
            a,
            beta,
            u_max: af.powf(-beta),
            b: (af + 1.0).powf(beta),
            b_minus_a_pow: a_pow * (beta * (1.0 / af).ln_1p()).exp_m1(),
        })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// a^{-β}
    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// (a+1)^β
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Maps `w` in `(0, 1]` to a proposal, or `None` if it does not fit in a `u64`.
    pub fn proposal_from_uniform(&self, w: f64) -> Option<u64> {
        let u = w * self.u_max;
        if u == self.u_max {
            return Some(self.a);
        }
        let y = u.powf(-1.0 / self.beta).floor();
        // 2^64 is exactly representable; anything at or above it overflows
        if y.is_nan() || y >= 18_446_744_073_709_551_616.0 {
            return None;
        }
        Some((y as u64).max(self.a))
    }

    /// Acceptance threshold for `v`: `y` is accepted iff `v <= threshold`.
    pub fn acceptance_threshold(&self, y: u64) -> f64 {
        let yf = y as f64;
        let tau_m1 = (self.beta * (1.0 / yf).ln_1p()).exp_m1();
        let tau = 1.0 + tau_m1;
        (self.a as f64) * tau * self.b_minus_a_pow / (self.b * yf * tau_m1)
    }
}

/// Draws one proposal from q(y).
pub fn propose(params: &SamplerParams, rng: &mut RngStream) -> u64 {
    loop {
        if let Some(y) = params.proposal_from_uniform(rng.uniform_open0()) {
            return y;
        }
    }
}

/// Simplified acceptance test `v y (τ−1)/(b − a^β) <= a τ / b`.
pub fn accept_test(params: &SamplerParams, y: u64, v: f64) -> bool {
    let yf = y as f64;
    let tau_m1 = (params.beta * (1.0 / yf).ln_1p()).exp_m1();
    let tau = 1.0 + tau_m1;
    v * yf * tau_m1 / params.b_minus_a_pow <= (params.a as f64) * tau / params.b
}

/// One exact variate from the discrete power law.
pub fn sample_one(params: &SamplerParams, rng: &mut RngStream) -> u64 {
    loop {
        let y = propose(params, rng);
        let v = rng.uniform();
        if accept_test(params, y, v) {
            return y;
        }
    }
}

/// Raw variates, in generation order.
pub fn sample_values(params: &SamplerParams, count: usize, rng: &mut RngStream) -> Vec<u64> {
    (0..count).map(|_| sample_one(params, rng)).collect()
}

/// `count` i.i.d. variates as a sample.
pub fn sample_n(params: &SamplerParams, count: u64, rng: &mut RngStream) -> Result<IntegerSample> {
    if count == 0 {
        return Err(Error::Domain("sample size must be >= 1".into()));
    }
    IntegerSample::from_values(sample_values(params, count as usize, rng))
}
