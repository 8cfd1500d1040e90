//! Brute-force verification engines: adaptive Simpson quadrature over (0, 1),
//! exact pmf summation, and numerical compounding of the binomial with an
//! arbitrary mixing density.
//!
//! Nothing here calls into [`crate::distributions`]; the densities below are
//! written out from their definitions with `libm`'s log-gamma so that a slip in
//! the closed forms cannot be mirrored by the checker.

use crate::error::{Error, Result};

/// Half-width of the integration range on the logit scale. `logistic(-650)` is
/// about 1e-282, far enough that integrable endpoint singularities of the
/// beta kernel with shapes down to 0.05 leave less than 1e-14 of mass behind.
const LOGIT_HALF_WIDTH: f64 = 650.0;
const INITIAL_PANEL_WIDTH: f64 = 1.0;
const MAX_PANELS: usize = 1 << 20;
const MAX_DEPTH: u32 = 40;

/// A point of (0, 1) carried together with its complement, so integrands can
/// evaluate `ln(1 − y)` accurately when `y` is within rounding of 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPoint {
    pub y: f64,
    pub ybar: f64,
}

impl UnitPoint {
    fn from_logit(u: f64) -> Self {
        // Both halves computed directly so neither suffers cancellation.
        if u >= 0.0 {
            let e = (-u).exp();
            Self {
                y: 1.0 / (1.0 + e),
                ybar: e / (1.0 + e),
            }
        } else {
            let e = u.exp();
            Self {
                y: e / (1.0 + e),
                ybar: 1.0 / (1.0 + e),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub estimated_error: f64,
    pub panels_used: usize,
}

struct Simpson<'a, F> {
    f: &'a F,
    panels: usize,
    error: f64,
}

impl<F: Fn(UnitPoint) -> f64> Simpson<'_, F> {
    fn g(&self, u: f64) -> f64 {
        let pt = UnitPoint::from_logit(u);
        let jac = pt.y * pt.ybar;
        if jac == 0.0 {
            return 0.0;
        }
        (self.f)(pt) * jac
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.g(lm);
        let frm = self.g(rm);
        let h = b - a;
        let left = h / 12.0 * (fa + 4.0 * flm + fm);
        let right = h / 12.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if !diff.is_finite() {
            return Err(Error::Domain("integrand produced a non-finite value".into()));
        }
        if diff.abs() <= 15.0 * tol || depth >= MAX_DEPTH {
            self.panels += 1;
            self.error += diff.abs() / 15.0;
            if self.panels > MAX_PANELS {
                return Err(Error::Quadrature {
                    panels: self.panels,
                    estimated_error: self.error,
                });
            }
            return Ok(left + right + diff / 15.0);
        }
        let l = self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
        let r = self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
        Ok(l + r)
    }
}

/// `∫₀¹ f(y) dy` by adaptive composite Simpson in the logit variable.
///
/// The substitution `y = 1/(1 + e^{-u})` maps the open interval onto the real
/// line and turns power-law endpoint singularities into exponential tails;
/// the range is truncated at `|u| = 650`.
pub fn integrate_unit_interval<F: Fn(UnitPoint) -> f64>(f: F, tol: f64) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let n_init = (2.0 * LOGIT_HALF_WIDTH / INITIAL_PANEL_WIDTH).round() as usize;
    let mut s = Simpson {
        f: &f,
        panels: 0,
        error: 0.0,
    };
    let local_tol = tol / n_init as f64;
    let mut total = 0.0;
    let mut a = -LOGIT_HALF_WIDTH;
    let mut fa = s.g(a);
    for i in 1..=n_init {
        let b = -LOGIT_HALF_WIDTH + i as f64 * INITIAL_PANEL_WIDTH;
        let fb = s.g(b);
        let fm = s.g(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += s.refine(a, b, fa, fm, fb, whole, local_tol, 0)?;
        a = b;
        fa = fb;
    }
    if !total.is_finite() {
        return Err(Error::Domain("integrand produced a non-finite value".into()));
    }
    if s.error > tol {
        return Err(Error::Quadrature {
            panels: s.panels,
            estimated_error: s.error,
        });
    }
    Ok(QuadratureResult {
        value: total,
        estimated_error: s.error,
        panels_used: s.panels,
    })
}

/// Result of [`pmf_moment_by_summation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummedMoment {
    pub value: f64,
    /// Total probability mass seen while summing.
    pub mass: f64,
}

impl SummedMoment {
    /// False when the supplied pmf does not sum to one within 1e-8, which
    /// makes `value` meaningless as a moment.
    pub fn mass_ok(&self) -> bool {
        (self.mass - 1.0).abs() <= 1e-8
    }
}

/// `Σ_{y=0}^{m} y^order · exp(log_pmf(y))` for `order ∈ {1, 2}`.
pub fn pmf_moment_by_summation<F: Fn(u32) -> f64>(log_pmf: F, m: u32, order: u32) -> Result<SummedMoment> {
    if !(1..=2).contains(&order) {
        return Err(Error::Domain(format!("moment order must be 1 or 2, got {order}")));
    }
    let mut value = 0.0;
    let mut mass = 0.0;
    for y in 0..=m {
        let p = log_pmf(y).exp();
        mass += p;
        value += f64::from(y).powi(order as i32) * p;
    }
    Ok(SummedMoment { value, mass })
}

/// `ln C(m, y) + y ln p + (m − y) ln(1 − p)` written out independently.
pub fn binomial_ln_pmf(y: u32, m: u32, p: UnitPoint) -> f64 {
    let (yf, mf) = (f64::from(y), f64::from(m));
    let ln_c = libm::lgamma(mf + 1.0) - libm::lgamma(yf + 1.0) - libm::lgamma(mf - yf + 1.0);
    let a = if y == 0 { 0.0 } else { yf * p.y.ln() };
    let b = if y == m { 0.0 } else { (mf - yf) * p.ybar.ln() };
    ln_c + a + b
}

/// `∫₀¹ Bin(y | m, p) · mixing(p) dp`.
pub fn mixed_binomial_pmf_by_quadrature<F: Fn(UnitPoint) -> f64>(
    y: u32,
    m: u32,
    mixing_pdf: F,
    tol: f64,
) -> Result<QuadratureResult> {
    if m == 0 || y > m {
        return Err(Error::Domain(format!("invalid count y = {y}, m = {m}")));
    }
    integrate_unit_interval(|p| binomial_ln_pmf(y, m, p).exp() * mixing_pdf(p), tol)
}

/// Linear density with mean `mu_t`, from `c(y|ν) = 2ν − 2(2ν − 1)y`, `ν = 2 − 3μ_t`.
pub fn tilted_density(p: UnitPoint, mu_t: f64) -> f64 {
    let nu = 2.0 - 3.0 * mu_t;
    2.0 * nu - 2.0 * (2.0 * nu - 1.0) * p.y
}

/// Beta density with shapes `α = μφ`, `β = (1 − μ)φ`.
pub fn beta_density(p: UnitPoint, mu: f64, phi: f64) -> f64 {
    let alpha = mu * phi;
    let beta = (1.0 - mu) * phi;
    let ln_norm = libm::lgamma(alpha + beta) - libm::lgamma(alpha) - libm::lgamma(beta);
    ((alpha - 1.0) * p.y.ln() + (beta - 1.0) * p.ybar.ln() + ln_norm).exp()
}

pub fn tilted_beta_density(p: UnitPoint, mu_t: f64, mu_b: f64, phi: f64, theta: f64) -> f64 {
    let tilted = if theta > 0.0 { theta * tilted_density(p, mu_t) } else { 0.0 };
    let beta = if theta < 1.0 {
        (1.0 - theta) * beta_density(p, mu_b, phi)
    } else {
        0.0
    };
    tilted + beta
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn constant_integrand() {
        let r = integrate_unit_interval(|_| 1.0, TOL).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14, "{r:?}");
        assert!(r.estimated_error <= TOL);
        assert!(r.panels_used >= 1300);
    }

    #[test]
    fn tilted_normalizes() {
        let r = integrate_unit_interval(|p| tilted_density(p, 0.6), TOL).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beta_mean_identity() {
        let r = integrate_unit_interval(|p| p.y * beta_density(p, 0.3, 4.0), TOL).unwrap();
        assert!((r.value - 0.3).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn singular_beta_normalizes() {
        let r = integrate_unit_interval(|p| beta_density(p, 0.5, 0.1), 1e-11).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn uniform_mixing_gives_discrete_uniform() {
        for y in 0..=4 {
            let r = mixed_binomial_pmf_by_quadrature(y, 4, |p| tilted_density(p, 0.5), TOL).unwrap();
            assert!((r.value - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn binomial_summation_mean() {
        let pt = UnitPoint { y: 0.5, ybar: 0.5 };
        let s = pmf_moment_by_summation(|y| binomial_ln_pmf(y, 10, pt), 10, 1).unwrap();
        assert!((s.value - 5.0).abs() < 1e-12);
        assert!(s.mass_ok());
        assert!(pmf_moment_by_summation(|_| 0.0, 3, 3).is_err());
        // A deficient pmf is reported through the mass.
        let s = pmf_moment_by_summation(|_| (0.1f64).ln(), 3, 1).unwrap();
        assert!(!s.mass_ok());
    }

    #[test]
    fn stable_under_tighter_tolerance() {
        let f = |p: UnitPoint| p.y.powi(3) * tilted_density(p, 2.0 / 3.0);
        let a = integrate_unit_interval(f, 1e-10).unwrap().value;
        let b = integrate_unit_interval(f, 1e-11).unwrap().value;
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(integrate_unit_interval(|_| 1.0, 0.0).is_err());
        assert!(mixed_binomial_pmf_by_quadrature(5, 4, |_| 1.0, TOL).is_err());
        assert!(integrate_unit_interval(|_| f64::NAN, TOL).is_err());
    }
}
