//! Hurwitz zeta function by Euler–Maclaurin summation.
//!
//! ```text
//! ζ(γ, a) ≈ Σ_{k=0}^{M-1} (a+k)^{-γ} + (a+M)^{1-γ}/(γ-1) + 1/(2 (a+M)^γ) + Σ_{k=1}^{P} B_{2k} C_{2k-1}(M)
//!
//! C_1(M)      = γ / (2 (a+M)^{γ+1})
//! C_{2k-1}(M) = (γ+2k-2)(γ+2k-3) / (2k (2k-1) (a+M)^2) · C_{2k-3}(M)
//! ```
//!
//! The correction series is asymptotic, so it is cut at its smallest term: a term whose
//! magnitude exceeds the previous one is discarded and the sum stops.

use crate::error::{Error, Result};

/// Default length of the direct summation.
pub const DEFAULT_M: u32 = 14;
/// Default maximum number of Bernoulli correction terms.
pub const DEFAULT_P: u32 = 18;

/// Even-index Bernoulli numbers B₂, B₄, …, B₃₆.
pub const BERNOULLI_EVEN: [f64; 18] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
];

/// Arguments of a single zeta evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaParams {
    pub gamma: f64,
    pub a: u64,
    /// Number of terms summed directly.
    pub m: u32,
    /// Maximum number of Bernoulli correction terms.
    pub p: u32,
    /// Stop the correction series at its smallest term.
    pub early_stop: bool,
}

impl ZetaParams {
    pub fn new(gamma: f64, a: u64) -> Self {
        ZetaParams {
            gamma,
            a,
            m: DEFAULT_M,
            p: DEFAULT_P,
            early_stop: true,
        }
    }

    pub fn with_terms(mut self, m: u32, p: u32) -> Self {
        self.m = m;
        self.p = p;
        self
    }

    pub fn without_early_stop(mut self) -> Self {
        self.early_stop = false;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 1.0) {
            return Err(Error::Domain(format!(
                "zeta exponent must be a finite value > 1, got {}",
                self.gamma
            )));
        }
        if self.a < 1 {
            return Err(Error::Domain("zeta lower limit must be >= 1".into()));
        }
        if self.m < 1 || self.p < 1 {
            return Err(Error::Domain("M and P must be >= 1".into()));
        }
        if self.p as usize > BERNOULLI_EVEN.len() {
            return Err(Error::Domain(format!(
                "P = {} exceeds the {} tabulated Bernoulli numbers",
                self.p,
                BERNOULLI_EVEN.len()
            )));
        }
        Ok(())
    }
}

/// ζ(γ, a) with the default M = 14, P = 18.
pub fn hurwitz_zeta(gamma: f64, a: u64) -> Result<f64> {
    hurwitz_zeta_with(&ZetaParams::new(gamma, a))
}

/// ζ(γ, a) with explicit summation parameters.
pub fn hurwitz_zeta_with(params: &ZetaParams) -> Result<f64> {
    params.validate()?;
    let gamma = params.gamma;
    let shift = params.a as f64 + params.m as f64;

    // smallest terms first
    let mut sum = shift.powf(1.0 - gamma) / (gamma - 1.0) + 0.5 * shift.powf(-gamma);
    let mut corr = 0.0;
    let mut prev_c = 0.0;
    let mut prev_mag = f64::INFINITY;
    for k in 1..=params.p {
        let c = correction_term(k, gamma, params.a, params.m, prev_c);
        let term = BERNOULLI_EVEN[k as usize - 1] * c;
        let mag = term.abs();
        if params.early_stop && mag > prev_mag {
            break;
        }
        corr += term;
        prev_c = c;
        prev_mag = mag;
    }
    sum += corr;
    for k in (0..params.m).rev() {
        sum += (params.a as f64 + k as f64).powf(-gamma);
    }
    Ok(sum)
}

/// Coefficient C₂ₖ₋₁(M). For `k == 1` the closed form is returned and `prev` is ignored;
/// otherwise `prev` must be C₂ₖ₋₃(M).
pub fn correction_term(k: u32, gamma: f64, a: u64, m: u32, prev: f64) -> f64 {
    let shift = a as f64 + m as f64;
    if k <= 1 {
        return gamma / (2.0 * shift.powf(gamma + 1.0));
    }
    let two_k = 2.0 * k as f64;
    (gamma + two_k - 2.0) * (gamma + two_k - 3.0) / (two_k * (two_k - 1.0) * shift * shift) * prev
}
