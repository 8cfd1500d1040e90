//! Tilted, beta (mean/dispersion), tilted beta, beta-binomial, tilted beta
//! binomial and beta-rectangular binomial distributions.
//!
//! Parameter bundles validate their domain on construction, so the density
//! and mass functions only check the support of the observation itself.

mod beta;
mod mixture;
mod sampling;
mod tilted;

pub use beta::{beta_binomial_log_pmf, beta_ln_pdf, beta_pdf, BetaMeanDisp};
pub use mixture::{
    brb_log_pmf, tbb_log_pmf, tbb_mean, tbb_variance, tilted_beta_mean, tilted_beta_pdf,
    tilted_beta_variance, TiltedBetaBinomialParams, TiltedBetaParams,
};
pub use sampling::{sample_beta, sample_tbb, sample_tilted, sample_tilted_beta};
pub use tilted::{tilted_moment, tilted_pdf, tilted_variance, TiltedParams, MU_T_MAX, MU_T_MIN};

pub(crate) use beta::bb_ln_mass;
pub(crate) use mixture::{compound_moments, tilted_ln_mass};

use crate::error::{Error, Result};

pub(crate) fn check_unit_open(y: f64) -> Result<()> {
    if y > 0.0 && y < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("y = {y} is outside (0, 1)")))
    }
}

pub(crate) fn check_count(y: u32, m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("number of trials must be at least 1".into()));
    }
    if y > m {
        return Err(Error::Domain(format!("y = {y} exceeds m = {m}")));
    }
    Ok(())
}
