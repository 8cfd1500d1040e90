use crate::error::{Error, Result};

use super::summary::mean;

/// Sample autocorrelations for lags `0..=max_lag` (biased estimator: every lag
/// divided by the same `n`).
pub fn autocorrelation(chain: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = chain.len();
    if 2 * max_lag >= n {
        return Err(Error::Diagnostics(format!(
            "max_lag {max_lag} must be below half the chain length {n}"
        )));
    }
    let m = mean(chain);
    let c0: f64 = chain.iter().map(|x| (x - m) * (x - m)).sum();
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(1.0);
    for k in 1..=max_lag {
        let ck: f64 = chain[..n - k]
            .iter()
            .zip(&chain[k..])
            .map(|(a, b)| (a - m) * (b - m))
            .sum();
        out.push(if c0 > 0.0 { ck / c0 } else { 0.0 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lag_zero_is_one() {
        let x: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
        assert_eq!(autocorrelation(&x, 5).unwrap()[0], 1.0);
        assert_eq!(autocorrelation(&[2.0; 10], 3).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn lag_limit() {
        assert!(autocorrelation(&[0.0; 10], 5).is_err());
        assert!(autocorrelation(&[0.0; 10], 4).is_ok());
    }
}
