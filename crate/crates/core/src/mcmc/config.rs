use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Length, thinning and adaptation settings for [`run_chains`](super::run_chains).
///
/// Defaults: 100 000 iterations, burn-in 10 000, thin 10, three chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub chains: usize,
    pub seed: u64,
    /// Iterations between re-estimates of the proposal shape during burn-in.
    pub adapt_window: usize,
    /// Overrides the default targets (0.234 for blocks of two or more
    /// parameters, 0.44 for scalar blocks).
    pub target_acceptance: Option<f64>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            iterations: 100_000,
            burn_in: 10_000,
            thin: 10,
            chains: 3,
            seed: 20_190_611,
            adapt_window: 500,
            target_acceptance: None,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.iterations {
            return Err(Error::Config(format!(
                "burn-in ({}) must be smaller than the number of iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::Config("thin must be at least 1".into()));
        }
        if self.chains == 0 {
            return Err(Error::Config("at least one chain is required".into()));
        }
        if self.adapt_window == 0 {
            return Err(Error::Config("adapt_window must be at least 1".into()));
        }
        if self.retained_per_chain() == 0 {
            return Err(Error::Config(format!(
                "no draws retained: {} post burn-in iterations with thin {}",
                self.iterations - self.burn_in,
                self.thin
            )));
        }
        if let Some(t) = self.target_acceptance {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Config(format!("target acceptance {t} must lie in (0, 1)")));
            }
        }
        Ok(())
    }

    /// `(iterations − burn_in) / thin`, rounded down.
    pub fn retained_per_chain(&self) -> usize {
        self.iterations.saturating_sub(self.burn_in) / self.thin.max(1)
    }

    pub(crate) fn target_for(&self, block_dim: usize) -> f64 {
        self.target_acceptance
            .unwrap_or(if block_dim >= 2 { 0.234 } else { 0.44 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SamplerConfig::default().validate().is_ok());
        let zero_after_burn = SamplerConfig {
            iterations: 100,
            burn_in: 100,
            ..Default::default()
        };
        assert!(zero_after_burn.validate().is_err());
        let thin0 = SamplerConfig {
            thin: 0,
            ..Default::default()
        };
        assert!(thin0.validate().is_err());
        let no_chain = SamplerConfig {
            chains: 0,
            ..Default::default()
        };
        assert!(no_chain.validate().is_err());
        let too_thin = SamplerConfig {
            iterations: 105,
            burn_in: 100,
            thin: 10,
            ..Default::default()
        };
        assert!(too_thin.validate().is_err());
        assert_eq!(SamplerConfig::default().retained_per_chain(), 9000);
    }

    #[test]
    fn acceptance_targets() {
        let c = SamplerConfig::default();
        assert_eq!(c.target_for(1), 0.44);
        assert_eq!(c.target_for(3), 0.234);
        let c = SamplerConfig {
            target_acceptance: Some(0.3),
            ..Default::default()
        };
        assert_eq!(c.target_for(1), 0.3);
    }
}
