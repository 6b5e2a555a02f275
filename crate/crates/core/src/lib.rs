//! Fitting discrete power laws `f(n) ∝ n^{-(β+1)}`, `n >= a`, to integer data.
//!
//! The exponent is estimated by maximum likelihood, the fit is tested with a Monte Carlo
//! Kolmogorov–Smirnov procedure (parametric bootstrap with refitting), and the lower cutoff
//! is chosen as the smallest `a` whose p-value exceeds a threshold.
//!
//! ```no_run
//! use dpl::{IntegerSample, ScanConfig};
//!
//! let sample = IntegerSample::from_values([1, 1, 1, 2, 3, 1, 5, 1, 2, 14]).unwrap();
//! let result = dpl::scan(&sample, &ScanConfig { n_sim: 100, ..ScanConfig::default() }).unwrap();
//! if let Some(a) = result.a_star {
//!     println!("a* = {a}, beta* = {:?}", result.beta_star);
//! }
//! ```

pub mod error;
pub mod estimate;
pub mod gof;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod sample;
pub mod special;

pub use error::{Error, Result};
pub use estimate::{fit_beta, MleConfig, MleResult};
pub use gof::{ks_statistic, p_value, KsResult, PValue};
pub use model::{log_likelihood, sigma_beta, IntegerSample, PowerLawModel, SufficientStat};
pub use pipeline::{fit_at_a, fit_at_a_with, scan, FitAtA, FitConfig, ScanConfig, ScanResult};
pub use sample::{RngStream, SamplerParams};
pub use special::{hurwitz_zeta, hurwitz_zeta_with, ZetaParams};
