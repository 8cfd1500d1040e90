use crate::error::{Error, Result};

use super::check_unit_open;

pub const MU_T_MIN: f64 = 1.0 / 3.0;
pub const MU_T_MAX: f64 = 2.0 / 3.0;

/// Tilted (linear) distribution on (0, 1), parameterized by its mean.
///
/// The density is `3(2μ_t − 1)(2y − 1) + 1`; it is uniform at `μ_t = 1/2` and
/// degenerates to a triangle with intercept 2 at either end of the admissible
/// range `[1/3, 2/3]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedParams {
    mu_t: f64,
}

impl TiltedParams {
    /// Values within `1e-14` outside the range (e.g. `1 − 1/3` in floating
    /// point) are clamped to the nearest bound.
    pub fn new(mu_t: f64) -> Result<Self> {
        const SLACK: f64 = 1e-14;
        if !(MU_T_MIN - SLACK..=MU_T_MAX + SLACK).contains(&mu_t) {
            return Err(Error::InvalidParameter {
                name: "mu_t",
                value: mu_t,
                reason: "must lie in [1/3, 2/3]",
            });
        }
        Ok(Self {
            mu_t: mu_t.clamp(MU_T_MIN, MU_T_MAX),
        })
    }

    pub fn uniform() -> Self {
        Self { mu_t: 0.5 }
    }

    #[inline]
    pub fn mu_t(&self) -> f64 {
        self.mu_t
    }

    /// The original parameter `ν = 2 − 3μ_t`.
    pub fn nu(&self) -> f64 {
        2.0 - 3.0 * self.mu_t
    }

    /// `3(2μ_t − 1)`: coefficient of `y²` in the CDF.
    #[inline]
    pub(crate) fn slope(&self) -> f64 {
        3.0 * (2.0 * self.mu_t - 1.0)
    }

    #[inline]
    pub(crate) fn density_unchecked(&self, y: f64) -> f64 {
        self.slope() * (2.0 * y - 1.0) + 1.0
    }
}

pub fn tilted_pdf(y: f64, p: &TiltedParams) -> Result<f64> {
    check_unit_open(y)?;
    Ok(p.density_unchecked(y))
}

/// Raw moment `E(Y^n)`.
pub fn tilted_moment(n: u32, p: &TiltedParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("moment order must be at least 1".into()));
    }
    let n = f64::from(n);
    Ok((3.0 * n * (2.0 * p.mu_t - 1.0) + n + 2.0) / ((n + 1.0) * (n + 2.0)))
}

pub fn tilted_variance(p: &TiltedParams) -> f64 {
    p.mu_t * (1.0 - p.mu_t) - 1.0 / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_density() {
        assert_eq!(tilted_pdf(0.5, &TiltedParams::new(0.5).unwrap()).unwrap(), 1.0);
        assert_eq!(tilted_pdf(0.123, &TiltedParams::uniform()).unwrap(), 1.0);
    }

    #[test]
    fn boundary_intercept() {
        let p = TiltedParams::new(1.0 / 3.0).unwrap();
        assert!((tilted_pdf(1e-12, &p).unwrap() - 2.0).abs() < 1e-10);
        assert!((p.nu() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(TiltedParams::new(0.3).is_err());
        assert!(TiltedParams::new(0.7).is_err());
        assert!(TiltedParams::new(f64::NAN).is_err());
        let p = TiltedParams::uniform();
        assert!(tilted_pdf(0.0, &p).is_err());
        assert!(tilted_pdf(1.0, &p).is_err());
        assert!(tilted_moment(0, &p).is_err());
    }

    #[test]
    fn moments() {
        let p = TiltedParams::new(0.45).unwrap();
        assert!((tilted_moment(1, &p).unwrap() - 0.45).abs() < 1e-15);
        let u = TiltedParams::uniform();
        assert!((tilted_moment(2, &u).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((tilted_variance(&u) - 1.0 / 12.0).abs() < 1e-15);
        let hi = TiltedParams::new(2.0 / 3.0).unwrap();
        let lo = TiltedParams::new(1.0 / 3.0).unwrap();
        assert!((tilted_variance(&hi) - 1.0 / 18.0).abs() < 1e-15);
        assert!((tilted_variance(&lo) - 1.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn density_nonnegative_across_range() {
        for i in 0..=20 {
            let mu_t = MU_T_MIN + (MU_T_MAX - MU_T_MIN) * f64::from(i) / 20.0;
            let p = TiltedParams::new(mu_t).unwrap();
            for j in 1..100 {
                assert!(tilted_pdf(f64::from(j) / 100.0, &p).unwrap() >= 0.0);
            }
        }
    }
}
