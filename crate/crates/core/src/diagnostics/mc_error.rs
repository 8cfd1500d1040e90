use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::summary::{mean, std_dev};

const BATCHES: usize = 30;

/// Monte Carlo standard error of a posterior mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McError {
    /// `SD / √N`, ignoring autocorrelation.
    pub naive: f64,
    /// Standard error from the means of 30 consecutive batches.
    pub batch_means: f64,
}

pub fn mc_error(chain: &[f64]) -> Result<McError> {
    let n = chain.len();
    if n < BATCHES {
        return Err(Error::Diagnostics(format!(
            "Monte Carlo error needs at least {BATCHES} draws, got {n}"
        )));
    }
    let naive = std_dev(chain) / (n as f64).sqrt();
    let size = n / BATCHES;
    let batch_means: Vec<f64> = chain[n - size * BATCHES..].chunks(size).map(mean).collect();
    let batch = std_dev(&batch_means) / (BATCHES as f64).sqrt();
    Ok(McError {
        naive,
        batch_means: batch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_chain_has_no_error() {
        let e = mc_error(&[1.5; 90]).unwrap();
        assert_eq!((e.naive, e.batch_means), (0.0, 0.0));
    }

    #[test]
    fn naive_is_sd_over_root_n() {
        let x: Vec<f64> = (0..300).map(|i| ((i * 31) % 17) as f64).collect();
        let e = mc_error(&x).unwrap();
        assert!((e.naive - std_dev(&x) / 300f64.sqrt()).abs() < 1e-15);
        assert!(e.batch_means > 0.0);
        assert!(mc_error(&x[..29]).is_err());
    }

    #[test]
    fn trending_chain_inflates_batch_error() {
        let x: Vec<f64> = (0..3000).map(|i| (i as f64 / 300.0).sin()).collect();
        let e = mc_error(&x).unwrap();
        assert!(e.batch_means > e.naive);
    }
}
