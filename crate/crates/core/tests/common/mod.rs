//! Independent oracles shared by the integration tests. Nothing here calls into the
//! code path it is used to check.

#![allow(dead_code)]

use dpl::sample::{sample_values, RngStream, SamplerParams};
use dpl::IntegerSample;

/// ζ(γ, a) by direct compensated summation of `terms` terms (smallest first) plus the
/// trapezoidal tail `(a+K)^{1-γ}/(γ-1) + (a+K)^{-γ}/2 + γ (a+K)^{-γ-1}/12`.
pub fn zeta_brute(gamma: f64, a: u64, terms: u64) -> f64 {
    let end = a as f64 + terms as f64;
    let mut sum = end.powf(1.0 - gamma) / (gamma - 1.0)
        + 0.5 * end.powf(-gamma)
        + gamma / 12.0 * end.powf(-gamma - 1.0);
    let mut comp = 0.0;
    for k in (0..terms).rev() {
        let t = (a as f64 + k as f64).powf(-gamma);
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// ∫_lo^hi g(t) dt with an n-point Gauss–Legendre rule.
pub fn integrate(g: impl Fn(f64) -> f64, lo: f64, hi: f64, rule: &[(f64, f64)]) -> f64 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    rule.iter()
        .map(|&(x, w)| w * g(mid + half * x))
        .sum::<f64>()
        * half
}

/// Proposal mass q(y) = a^β ∫_y^{y+1} β t^{-β-1} dt, evaluated by quadrature.
pub fn proposal_mass_quadrature(a: u64, beta: f64, y: u64, rule: &[(f64, f64)]) -> f64 {
    let af = a as f64;
    af.powf(beta)
        * integrate(
            |t| beta * t.powf(-beta - 1.0),
            y as f64,
            y as f64 + 1.0,
            rule,
        )
}

/// f(y) q(a) / (f(a) q(y)) with the mass ratio written out and q by quadrature.
pub fn acceptance_ratio_oracle(a: u64, beta: f64, y: u64, rule: &[(f64, f64)]) -> f64 {
    let f_ratio = (a as f64 / y as f64).powf(beta + 1.0);
    f_ratio * proposal_mass_quadrature(a, beta, a, rule)
        / proposal_mass_quadrature(a, beta, y, rule)
}

/// Upper bound on the tail Σ_{n>=m} n^{-γ} by ∫_{m-1}^∞.
pub fn tail_upper(gamma: f64, m: u64) -> f64 {
    (m as f64 - 1.0).powf(1.0 - gamma) / (gamma - 1.0)
}

/// Lower bound on the tail Σ_{n>=m} n^{-γ} by ∫_m^∞.
pub fn tail_lower(gamma: f64, m: u64) -> f64 {
    (m as f64).powf(1.0 - gamma) / (gamma - 1.0)
}

pub fn power_law_values(a: u64, beta: f64, n: usize, seed: u64, stream: u64) -> Vec<u64> {
    let p = SamplerParams::new(a, beta).unwrap();
    sample_values(&p, n, &mut RngStream::new(seed, stream))
}

pub fn power_law_sample(a: u64, beta: f64, n: usize, seed: u64, stream: u64) -> IntegerSample {
    IntegerSample::from_values(power_law_values(a, beta, n, seed, stream)).unwrap()
}

/// Geometric variates on {1, 2, …} with success probability `p`.
pub fn geometric_sample(p: f64, n: usize, seed: u64) -> IntegerSample {
    let mut rng = RngStream::new(seed, 0);
    let v: Vec<u64> = (0..n)
        .map(|_| 1 + (rng.uniform_open0().ln() / (1.0 - p).ln()).floor() as u64)
        .collect();
    IntegerSample::from_values(v).unwrap()
}

/// Pearson statistic over `observed` / `expected` bins.
pub fn chi_squared(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}

/// Exact binomial(n, p) quantile: smallest k with CDF(k) >= q.
pub fn binomial_quantile(n: u64, p: f64, q: f64) -> u64 {
    let mut pmf = (1.0 - p).powi(n as i32);
    let mut cdf = pmf;
    let mut k = 0;
    while cdf < q && k < n {
        pmf *= (n - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
        k += 1;
        cdf += pmf;
    }
    k
}

/// Empirical N_n/N_a − S(n) deviation scanned over every integer in [a, max + 1], with S
/// supplied by the caller.
pub fn ks_exhaustive(sample: &IntegerSample, a: u64, survival: impl Fn(u64) -> f64) -> f64 {
    let n_a = sample.len() as f64;
    let max = sample.max().unwrap();
    let mut best: f64 = 0.0;
    let values: Vec<u64> = sample.values().collect();
    let mut below = 0usize;
    for n in a..=max + 1 {
        while below < values.len() && values[below] < n {
            below += 1;
        }
        let count = (values.len() - below) as f64;
        best = best.max((count / n_a - survival(n)).abs());
    }
    // beyond max + 1 the empirical side is 0 and S only decreases
    best
}
