use serde::{Deserialize, Serialize};

use crate::distributions::{MU_T_MAX, MU_T_MIN};
use crate::error::{Error, Result};
use crate::regression::{Dataset, Model, ModelSpec, ParameterVector};

use super::sampler::{Block, Evaluation, Target};

/// Independent `N(0, 1/precision)` priors on every coefficient of each
/// structure and `U(1/3, 2/3)` on a free `μ_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorSpec {
    pub beta_precision: f64,
    pub gamma_precision: f64,
    pub delta_precision: f64,
}

impl Default for PriorSpec {
    fn default() -> Self {
        Self {
            beta_precision: 0.1,
            gamma_precision: 0.1,
            delta_precision: 0.1,
        }
    }
}

impl PriorSpec {
    pub fn with_precision(precision: f64) -> Self {
        Self {
            beta_precision: precision,
            gamma_precision: precision,
            delta_precision: precision,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("beta_precision", self.beta_precision),
            ("gamma_precision", self.gamma_precision),
            ("delta_precision", self.delta_precision),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Posterior of a compiled regression model: the [`Target`] the sampler runs on.
#[derive(Debug, Clone)]
pub struct RegressionPosterior {
    model: Model,
    prior: PriorSpec,
}

impl RegressionPosterior {
    pub fn new(model: Model, prior: PriorSpec) -> Result<Self> {
        prior.validate()?;
        Ok(Self { model, prior })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    /// Unnormalized log prior; `-inf` outside the `μ_t` support.
    pub fn log_prior(&self, x: &[f64]) -> f64 {
        let l = self.model.layout();
        let quad = |xs: &[f64], prec: f64| -0.5 * prec * xs.iter().map(|v| v * v).sum::<f64>();
        let mut lp = quad(&x[l.beta_range()], self.prior.beta_precision)
            + quad(&x[l.gamma_range()], self.prior.gamma_precision)
            + quad(&x[l.delta_range()], self.prior.delta_precision);
        if let Some(k) = l.mu_t_index() {
            if !(x[k] > MU_T_MIN && x[k] < MU_T_MAX) {
                lp = f64::NEG_INFINITY;
            }
        }
        lp
    }
}

impl Target for RegressionPosterior {
    fn dim(&self) -> usize {
        self.model.layout().dim()
    }

    fn blocks(&self) -> Vec<Block> {
        let l = self.model.layout();
        let mut blocks = Vec::with_capacity(4);
        for (name, range) in [("beta", l.beta_range()), ("gamma", l.gamma_range()), ("delta", l.delta_range())] {
            if !range.is_empty() {
                blocks.push(Block::new(name, range));
            }
        }
        if let Some(k) = l.mu_t_index() {
            blocks.push(Block::new("mu_t", k..k + 1).bounded(MU_T_MIN, MU_T_MAX));
        }
        blocks
    }

    fn evaluate(&self, x: &[f64]) -> Evaluation {
        let lp = self.log_prior(x);
        if lp == f64::NEG_INFINITY {
            return Evaluation::rejected();
        }
        let ll = self.model.log_likelihood_stacked(x);
        Evaluation {
            log_posterior: ll + lp,
            log_likelihood: ll,
        }
    }
}

/// Log-likelihood plus log-priors, up to an additive constant.
pub fn log_posterior(spec: &ModelSpec, data: &Dataset, prior: &PriorSpec, params: &ParameterVector) -> Result<f64> {
    let post = RegressionPosterior::new(Model::new(spec, data)?, *prior)?;
    let x = params.stacked();
    if x.len() != post.dim() {
        return Err(Error::DimensionMismatch {
            what: "stacked parameter vector",
            expected: post.dim(),
            got: x.len(),
        });
    }
    Ok(post.evaluate(&x).log_posterior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::{log_likelihood, Family};

    fn data() -> Dataset {
        Dataset::new(vec![3, 5], vec![10, 8], vec![("x".into(), vec![0.0, 1.0])]).unwrap()
    }

    #[test]
    fn zero_params_reduce_to_likelihood() {
        let spec = ModelSpec::parse(Family::TiltedBetaBinomial, &["1", "x"], &["1"], &["1"]).unwrap();
        let p = ParameterVector {
            beta: vec![0.0, 0.0],
            gamma: vec![0.0],
            delta: vec![0.0],
            mu_t: Some(0.5),
        };
        let lp = log_posterior(&spec, &data(), &PriorSpec::default(), &p).unwrap();
        assert_eq!(lp, log_likelihood(&spec, &data(), &p).unwrap());
    }

    #[test]
    fn mu_t_outside_support() {
        let spec = ModelSpec::parse(Family::TiltedBetaBinomial, &["1"], &["1"], &["1"]).unwrap();
        let p = ParameterVector {
            beta: vec![0.0],
            gamma: vec![0.0],
            delta: vec![0.0],
            mu_t: Some(0.7),
        };
        assert_eq!(
            log_posterior(&spec, &data(), &PriorSpec::default(), &p).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn prior_only_ratio_is_normal_kernel_ratio() {
        let empty = Dataset::new(vec![], vec![], vec![("x".into(), vec![])]).unwrap();
        let spec = ModelSpec::parse(Family::BetaBinomial, &["1", "x"], &["1"], &[]).unwrap();
        let prior = PriorSpec {
            beta_precision: 0.1,
            gamma_precision: 0.5,
            delta_precision: 0.1,
        };
        let p1 = ParameterVector {
            beta: vec![1.0, -2.0],
            gamma: vec![0.5],
            delta: vec![],
            mu_t: None,
        };
        let p2 = ParameterVector {
            beta: vec![0.3, 0.2],
            gamma: vec![-1.5],
            delta: vec![],
            mu_t: None,
        };
        let diff = log_posterior(&spec, &empty, &prior, &p1).unwrap() - log_posterior(&spec, &empty, &prior, &p2).unwrap();
        let kernel = |p: &ParameterVector| {
            -0.05 * p.beta.iter().map(|b| b * b).sum::<f64>() - 0.25 * p.gamma[0] * p.gamma[0]
        };
        assert!((diff - (kernel(&p1) - kernel(&p2))).abs() < 1e-14);
    }

    #[test]
    fn precision_must_be_positive() {
        assert!(PriorSpec::with_precision(0.0).validate().is_err());
        assert!(PriorSpec::default().validate().is_ok());
    }
}
