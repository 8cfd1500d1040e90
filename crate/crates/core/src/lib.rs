//! Tilted beta binomial (TBB) and beta-rectangular binomial (BRB) regression.
//!
//! The crate provides
//!
//! * closed-form densities, pmfs, moments and samplers for the tilted, tilted
//!   beta, beta-binomial, TBB and BRB distributions ([`distributions`]);
//! * regression structures with logit/log links and the exact
//!   observation-level likelihood for binomial, beta-binomial, BRB and TBB
//!   families ([`regression`]);
//! * an adaptive random-walk Metropolis-within-Gibbs sampler ([`mcmc`]);
//! * Geweke and Brooks-Gelman-Rubin diagnostics, Monte Carlo errors,
//!   autocorrelations and Pearson residuals ([`diagnostics`]);
//! * deviance summaries and DIC ([`model_selection`]);
//! * brute-force quadrature and summation oracles ([`oracle`]) and the
//!   self-check suite built on them ([`check`]);
//! * the command implementations behind the `tbbreg` binary ([`cli`]).
//!
//! ```
//! use tbbreg::distributions::{tbb_log_pmf, tbb_mean, TiltedBetaBinomialParams};
//!
//! let p = TiltedBetaBinomialParams::from_values(0.4, 0.6, 5.0, 0.3, 20).unwrap();
//! let total: f64 = (0..=20).map(|y| tbb_log_pmf(y, &p).unwrap().exp()).sum();
//! assert!((total - 1.0).abs() < 1e-11);
//! assert!((tbb_mean(&p) - 20.0 * (0.3 * 0.4 + 0.7 * 0.6)).abs() < 1e-12);
//! ```

pub mod check;
pub mod cli;
pub mod diagnostics;
pub mod distributions;
pub mod error;
pub mod mcmc;
pub mod model_selection;
pub mod oracle;
pub mod regression;
pub mod seeds;
pub mod special;

pub use error::{Error, Result};
