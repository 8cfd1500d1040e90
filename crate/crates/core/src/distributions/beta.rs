use crate::error::{Error, Result};
use crate::special::{ln_beta, ln_choose, ln_gamma};

use super::{check_count, check_unit_open};

/// Beyond this dispersion the log-gamma differences lose too many digits and
/// the beta-binomial mass is evaluated as a finite product instead.
const PRODUCT_FORM_PHI: f64 = 1e4;

/// Beta distribution in mean/dispersion form: shapes `μφ` and `(1 − μ)φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaMeanDisp {
    mu_b: f64,
    phi: f64,
}

impl BetaMeanDisp {
    pub fn new(mu_b: f64, phi: f64) -> Result<Self> {
        if !(mu_b > 0.0 && mu_b < 1.0) {
            return Err(Error::InvalidParameter {
                name: "mu_b",
                value: mu_b,
                reason: "must lie in (0, 1)",
            });
        }
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: phi,
                reason: "must be positive and finite",
            });
        }
        Ok(Self { mu_b, phi })
    }

    #[inline]
    pub fn mu_b(&self) -> f64 {
        self.mu_b
    }

    #[inline]
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Shape parameters `(α, β)`.
    pub fn shapes(&self) -> (f64, f64) {
        (self.mu_b * self.phi, (1.0 - self.mu_b) * self.phi)
    }

    pub fn mean(&self) -> f64 {
        self.mu_b
    }

    pub fn variance(&self) -> f64 {
        self.mu_b * (1.0 - self.mu_b) / (1.0 + self.phi)
    }
}

pub fn beta_ln_pdf(y: f64, p: &BetaMeanDisp) -> Result<f64> {
    check_unit_open(y)?;
    let (a, b) = p.shapes();
    Ok((a - 1.0) * y.ln() + (b - 1.0) * (-y).ln_1p() - ln_beta(a, b))
}

pub fn beta_pdf(y: f64, p: &BetaMeanDisp) -> Result<f64> {
    beta_ln_pdf(y, p).map(f64::exp)
}

pub fn beta_binomial_log_pmf(y: u32, m: u32, p: &BetaMeanDisp) -> Result<f64> {
    check_count(y, m)?;
    Ok(bb_ln_mass(y, m, p.mu_b, p.phi, ln_choose(m, y)))
}

/// Beta-binomial log-mass with a precomputed `ln C(m, y)`.
///
/// `phi = +inf` gives the binomial limit.
pub(crate) fn bb_ln_mass(y: u32, m: u32, mu: f64, phi: f64, ln_choose_my: f64) -> f64 {
    let k = m - y;
    if phi.is_infinite() {
        return ln_choose_my + f64::from(y) * mu.ln() + f64::from(k) * (-mu).ln_1p();
    }
    let a = mu * phi;
    let b = (1.0 - mu) * phi;
    if phi > PRODUCT_FORM_PHI {
        // B(y + a, k + b) / B(a, b) = Π(a + j) Π(b + j) / Π(φ + j)
        let up_a: f64 = (0..y).map(|j| (a + f64::from(j)).ln()).sum();
        let up_b: f64 = (0..k).map(|j| (b + f64::from(j)).ln()).sum();
        let down: f64 = (0..m).map(|j| (phi + f64::from(j)).ln()).sum();
        return ln_choose_my + up_a + up_b - down;
    }
    ln_choose_my + ln_gamma(f64::from(y) + a) + ln_gamma(f64::from(k) + b) - ln_gamma(f64::from(m) + phi)
        - ln_gamma(a)
        - ln_gamma(b)
        + ln_gamma(phi)
}
