use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation (divisor `n − 1`).
pub fn std_dev(x: &[f64]) -> f64 {
    let m = mean(x);
    let ss: f64 = x.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (x.len() as f64 - 1.0)).sqrt()
}

/// Type-7 quantile (linear interpolation between order statistics) of
/// already-sorted data.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Mean, standard deviation, median and central 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub median: f64,
    pub q975: f64,
}

impl Summary {
    pub fn of(x: &[f64]) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::Diagnostics(format!("summary needs at least 2 values, got {}", x.len())));
        }
        if x.iter().any(|v| v.is_nan()) {
            return Err(Error::Diagnostics("summary input contains NaN".into()));
        }
        let mut sorted = x.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            mean: mean(x),
            sd: std_dev(x),
            q025: quantile(&sorted, 0.025),
            median: quantile(&sorted, 0.5),
            q975: quantile(&sorted, 0.975),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type7_quantiles() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&s, 0.5), 3.0);
        assert_eq!(quantile(&s, 0.0), 1.0);
        assert_eq!(quantile(&s, 1.0), 5.0);
        assert!((quantile(&s, 0.025) - 1.1).abs() < 1e-12);
        assert!((quantile(&s, 0.975) - 4.9).abs() < 1e-12);
        assert!((quantile(&[1.0, 2.0, 3.0, 4.0], 0.5) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn constant_summary() {
        let s = Summary::of(&[7.5; 10]).unwrap();
        assert_eq!((s.mean, s.sd, s.q025, s.median, s.q975), (7.5, 0.0, 7.5, 7.5, 7.5));
        assert!(Summary::of(&[1.0]).is_err());
    }
}
