//! Maximum-likelihood estimate of the exponent.
//!
//! ℓ(β) is smooth and strictly concave, so a derivative-free 1-D search is enough: the
//! maximum is bracketed by walking uphill from `beta_init`, then refined with Brent's
//! parabolic/golden-section method.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{log_likelihood, sigma_beta, SufficientStat};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MleConfig {
    pub beta_init: f64,
    /// Absolute tolerance on β.
    pub beta_tol: f64,
    pub beta_bounds: (f64, f64),
    pub max_iter: u32,
}

impl Default for MleConfig {
    fn default() -> Self {
        MleConfig {
            beta_init: 1.0,
            beta_tol: 1e-6,
            beta_bounds: (1e-4, 50.0),
            max_iter: 10_000,
        }
    }
}

impl MleConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.beta_bounds;
        if self.beta_tol.is_nan() || self.beta_tol <= 0.0 {
            return Err(Error::Config("beta_tol must be > 0".into()));
        }
        if !(lo > 0.0 && lo < hi && hi.is_finite()) {
            return Err(Error::Config(format!("invalid beta bounds ({lo}, {hi})")));
        }
        if !(self.beta_init > lo && self.beta_init < hi) {
            return Err(Error::Config(format!(
                "beta_init {} outside bounds ({lo}, {hi})",
                self.beta_init
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MleResult {
    pub beta_emp: f64,
    pub sigma: f64,
    pub loglik_at_max: f64,
    /// Objective evaluations used.
    pub iterations: u32,
    pub converged: bool,
}

struct Objective<'a> {
    stat: &'a SufficientStat,
    a: u64,
    evals: u32,
    max_iter: u32,
}

impl Objective<'_> {
    /// Negative log-likelihood, so the search minimizes.
    fn eval(&mut self, beta: f64) -> Result<f64> {
        if self.evals >= self.max_iter {
            return Err(Error::NonConvergence(format!(
                "iteration limit {} reached",
                self.max_iter
            )));
        }
        self.evals += 1;
        Ok(-log_likelihood(self.stat, self.a, beta)?)
    }
}

const GOLDEN: f64 = 1.618_033_988_749_895;
const CGOLD: f64 = 0.381_966_011_250_105;

/// Fits β at cutoff `a` from the sufficient statistic of the truncated sample.
pub fn fit_beta(stat: &SufficientStat, a: u64, config: &MleConfig) -> Result<MleResult> {
    config.validate()?;
    if stat.n_a < 1 {
        return Err(Error::EmptyTail { a });
    }
    if stat.log_geo_mean <= (a as f64).ln() {
        return Err(Error::Degenerate { a, n_a: stat.n_a });
    }
    let (lo, hi) = config.beta_bounds;
    let mut obj = Objective {
        stat,
        a,
        evals: 0,
        max_iter: config.max_iter,
    };

    let (left, right) = bracket(&mut obj, config.beta_init, lo, hi)?;
    let (beta, fmin) = brent(&mut obj, left, right, config.beta_tol)?;

    if beta - lo <= 2.0 * config.beta_tol || hi - beta <= 2.0 * config.beta_tol {
        return Err(Error::NonConvergence(format!(
            "maximum at the search bound (beta = {beta})"
        )));
    }
    Ok(MleResult {
        beta_emp: beta,
        sigma: sigma_beta(beta, stat.n_a),
        loglik_at_max: -fmin,
        iterations: obj.evals,
        converged: true,
    })
}

/// Returns an interval containing the minimum of the (unimodal) objective.
fn bracket(obj: &mut Objective<'_>, x0: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let mut step = 0.1 * x0.max(0.1);
    let f0 = obj.eval(x0)?;
    let x1 = (x0 + step).min(hi);
    let f1 = obj.eval(x1)?;
    // walk in the descending direction
    let (mut prev, mut cur, mut fcur, dir) = if f1 < f0 {
        (x0, x1, f1, 1.0)
    } else {
        let xm = (x0 - step).max(lo);
        let fm = obj.eval(xm)?;
        if fm >= f0 {
            return Ok((xm, x1));
        }
        (x0, xm, fm, -1.0)
    };
    loop {
        if cur <= lo || cur >= hi {
            return Ok(if dir > 0.0 { (prev, hi) } else { (lo, prev) });
        }
        step *= GOLDEN;
        let next = (cur + dir * step).clamp(lo, hi);
        let fnext = obj.eval(next)?;
        if fnext >= fcur {
            return Ok(if dir > 0.0 {
                (prev, next)
            } else {
                (next, prev)
            });
        }
        prev = cur;
        cur = next;
        fcur = fnext;
    }
}

/// Brent's minimization on `[a, b]` to absolute tolerance `tol`.
fn brent(obj: &mut Objective<'_>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let mut x = a + CGOLD * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = obj.eval(x)?;
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    loop {
        let xm = 0.5 * (a + b);
        let tol1 = 1e-10 * x.abs() + 0.25 * tol;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            return Ok((x, fx));
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + tol1.copysign(d)
        };
        let fu = obj.eval(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
}
