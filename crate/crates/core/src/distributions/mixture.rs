use crate::error::{Error, Result};
use crate::special::{ln_choose, ln_factorial, ln_or_neg_inf, log_sum_exp};

use super::beta::bb_ln_mass;
use super::{beta_pdf, check_count, check_unit_open, tilted_variance, BetaMeanDisp, TiltedParams};

/// Mixture `θ·tilted(μ_t) + (1 − θ)·Beta(μ_b, φ)` on (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedBetaParams {
    pub tilted: TiltedParams,
    pub beta: BetaMeanDisp,
    theta: f64,
}

impl TiltedBetaParams {
    pub fn new(tilted: TiltedParams, beta: BetaMeanDisp, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(Self { tilted, beta, theta })
    }

    /// Convenience constructor from raw values.
    pub fn from_values(mu_t: f64, mu_b: f64, phi: f64, theta: f64) -> Result<Self> {
        Self::new(TiltedParams::new(mu_t)?, BetaMeanDisp::new(mu_b, phi)?, theta)
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Binomial count whose success probability follows a [`TiltedBetaParams`] mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedBetaBinomialParams {
    pub mix: TiltedBetaParams,
    m: u32,
}

impl TiltedBetaBinomialParams {
    pub fn new(mix: TiltedBetaParams, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter {
                name: "m",
                value: 0.0,
                reason: "number of trials must be at least 1",
            });
        }
        Ok(Self { mix, m })
    }

    pub fn from_values(mu_t: f64, mu_b: f64, phi: f64, theta: f64, m: u32) -> Result<Self> {
        Self::new(TiltedBetaParams::from_values(mu_t, mu_b, phi, theta)?, m)
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }
}

pub fn tilted_beta_pdf(y: f64, p: &TiltedBetaParams) -> Result<f64> {
    check_unit_open(y)?;
    let beta = if p.theta < 1.0 { beta_pdf(y, &p.beta)? } else { 0.0 };
    Ok(p.theta * p.tilted.density_unchecked(y) + (1.0 - p.theta) * beta)
}

pub fn tilted_beta_mean(p: &TiltedBetaParams) -> f64 {
    p.theta * p.tilted.mu_t() + (1.0 - p.theta) * p.beta.mu_b()
}

/// Two-component mixture variance `θV_t + (1−θ)V_b + θ(1−θ)(μ_t − μ_b)²`.
pub fn tilted_beta_variance(p: &TiltedBetaParams) -> f64 {
    let th = p.theta;
    let gap = p.tilted.mu_t() - p.beta.mu_b();
    th * tilted_variance(&p.tilted) + (1.0 - th) * p.beta.variance() + th * (1.0 - th) * gap * gap
}

/// Log-mass of the tilted component: `ln[2 C(m,y) (y(6μ_t−3) + m(2−3μ_t) + 1)/(m+2) B(y+1, m−y+1)]`.
pub(crate) fn tilted_ln_mass(y: u32, m: u32, mu_t: f64, ln_choose_my: f64, ln_beta_y: f64) -> f64 {
    let (yf, mf) = (f64::from(y), f64::from(m));
    let bracket = (yf * (6.0 * mu_t - 3.0) + mf * (2.0 - 3.0 * mu_t) + 1.0) / (mf + 2.0);
    std::f64::consts::LN_2 + ln_choose_my + bracket.ln() + ln_beta_y
}

/// `ln B(y + 1, m − y + 1)` from factorials.
#[inline]
pub(crate) fn ln_beta_unit(y: u32, m: u32) -> f64 {
    ln_factorial(y) + ln_factorial(m - y) - ln_factorial(m + 1)
}

pub fn tbb_log_pmf(y: u32, p: &TiltedBetaBinomialParams) -> Result<f64> {
    let m = p.m;
    check_count(y, m)?;
    let lc = ln_choose(m, y);
    let th = p.mix.theta;
    let tilted = tilted_ln_mass(y, m, p.mix.tilted.mu_t(), lc, ln_beta_unit(y, m));
    let bb = bb_ln_mass(y, m, p.mix.beta.mu_b(), p.mix.beta.phi(), lc);
    Ok(log_sum_exp(
        ln_or_neg_inf(th) + tilted,
        ln_or_neg_inf(1.0 - th) + bb,
    ))
}

/// Beta-rectangular binomial: the tilted beta binomial with a flat tilted component.
pub fn brb_log_pmf(y: u32, m: u32, p_beta: &BetaMeanDisp, theta: f64) -> Result<f64> {
    let mix = TiltedBetaParams::new(TiltedParams::uniform(), *p_beta, theta)?;
    tbb_log_pmf(y, &TiltedBetaBinomialParams::new(mix, m)?)
}

pub fn tbb_mean(p: &TiltedBetaBinomialParams) -> f64 {
    f64::from(p.m) * tilted_beta_mean(&p.mix)
}

pub fn tbb_variance(p: &TiltedBetaBinomialParams) -> f64 {
    compound_moments(p.m, tilted_beta_mean(&p.mix), tilted_beta_variance(&p.mix)).1
}

/// Mean and variance of `Bin(m, P)` given `E(P)` and `V(P)`.
#[inline]
pub(crate) fn compound_moments(m: u32, mean_p: f64, var_p: f64) -> (f64, f64) {
    let mf = f64::from(m);
    (
        mf * mean_p,
        mf * ((mf - 1.0) * var_p + mean_p * (1.0 - mean_p)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::beta_binomial_log_pmf;

    fn sum_mass(m: u32, f: impl Fn(u32) -> f64) -> f64 {
        (0..=m).map(|y| f(y).exp()).sum()
    }

    #[test]
    fn tbb_collapses_to_bb_at_theta_zero() {
        let p = TiltedBetaBinomialParams::from_values(0.4, 0.35, 2.0, 0.0, 15).unwrap();
        let bb = BetaMeanDisp::new(0.35, 2.0).unwrap();
        for y in 0..=15 {
            assert_eq!(
                tbb_log_pmf(y, &p).unwrap(),
                beta_binomial_log_pmf(y, 15, &bb).unwrap()
            );
        }
    }

    #[test]
    fn single_trial_uniform() {
        let p = TiltedBetaBinomialParams::from_values(0.5, 0.2, 3.0, 1.0, 1).unwrap();
        assert!((tbb_log_pmf(0, &p).unwrap() - 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn normalization() {
        let p = TiltedBetaBinomialParams::from_values(0.4, 0.6, 5.0, 0.3, 20).unwrap();
        assert!((sum_mass(20, |y| tbb_log_pmf(y, &p).unwrap()) - 1.0).abs() < 1e-11);
        let b = BetaMeanDisp::new(0.25, 8.0).unwrap();
        assert!((sum_mass(12, |y| brb_log_pmf(y, 12, &b, 0.6).unwrap()) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn brb_is_tbb_at_half() {
        let b = BetaMeanDisp::new(0.25, 8.0).unwrap();
        let p = TiltedBetaBinomialParams::new(TiltedBetaParams::new(TiltedParams::uniform(), b, 0.6).unwrap(), 12)
            .unwrap();
        for y in 0..=12 {
            assert_eq!(
                brb_log_pmf(y, 12, &b, 0.6).unwrap().to_bits(),
                tbb_log_pmf(y, &p).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn brb_pure_uniform_is_discrete_uniform() {
        let b = BetaMeanDisp::new(0.3, 2.0).unwrap();
        for y in 0..=4 {
            let pmf = brb_log_pmf(y, 4, &b, 1.0).unwrap().exp();
            assert!((pmf - 0.2).abs() < 1e-14, "y={y} pmf={pmf}");
        }
    }

    #[test]
    fn mixture_moments_degenerate_cases() {
        let p = TiltedBetaParams::from_values(0.6, 0.2, 3.0, 1.0).unwrap();
        assert_eq!(tilted_beta_mean(&p), 0.6);
        let p = TiltedBetaParams::from_values(0.6, 0.2, 3.0, 0.0).unwrap();
        assert_eq!(tilted_beta_mean(&p), 0.2);
        assert!((tilted_beta_variance(&p) - 0.16 / 4.0).abs() < 1e-16);
        let p = TiltedBetaParams::from_values(0.5, 0.2, 3.0, 1.0).unwrap();
        assert!((tilted_beta_variance(&p) - 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn tbb_moment_edge_cases() {
        let p = TiltedBetaBinomialParams::from_values(0.5, 0.2, 4.0, 0.3, 10).unwrap();
        assert!((tbb_mean(&p) - 2.9).abs() < 1e-12);
        let p = TiltedBetaBinomialParams::from_values(0.5, 0.3, 1e8, 0.0, 10).unwrap();
        assert!((tbb_variance(&p) - 2.1).abs() < 1e-4);
        let p = TiltedBetaBinomialParams::from_values(0.6, 0.3, 2.0, 0.4, 1).unwrap();
        let e = tilted_beta_mean(&p.mix);
        assert_eq!(tbb_variance(&p), e * (1.0 - e));
        assert_eq!(tbb_mean(&p), e);
    }

    #[test]
    fn tilted_beta_pdf_edges() {
        let p = TiltedBetaParams::from_values(0.5, 0.3, 4.0, 1.0).unwrap();
        for y in [0.01, 0.3, 0.77, 0.99] {
            assert_eq!(tilted_beta_pdf(y, &p).unwrap(), 1.0);
        }
        let p = TiltedBetaParams::from_values(0.6, 0.3, 4.0, 0.0).unwrap();
        let b = BetaMeanDisp::new(0.3, 4.0).unwrap();
        assert_eq!(tilted_beta_pdf(0.42, &p).unwrap(), beta_pdf(0.42, &b).unwrap());
        assert!(tilted_beta_pdf(1.0, &p).is_err());
        assert!(TiltedBetaParams::from_values(0.6, 0.3, 4.0, 1.5).is_err());
        assert!(TiltedBetaBinomialParams::from_values(0.6, 0.3, 4.0, 0.5, 0).is_err());
    }

    #[test]
    fn out_of_support_count() {
        let p = TiltedBetaBinomialParams::from_values(0.6, 0.3, 4.0, 0.5, 5).unwrap();
        assert!(tbb_log_pmf(6, &p).is_err());
    }
}
