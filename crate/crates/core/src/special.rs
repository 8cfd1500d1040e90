//! Log-space helpers shared by the distributions and the likelihood.

use std::sync::OnceLock;

pub use statrs::function::gamma::ln_gamma;

const SHARED_TABLE_LEN: usize = 4096;

/// Table of `ln(k!)` for `k = 0..=max`.
#[derive(Debug, Clone)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(max: usize) -> Self {
        let mut values = Vec::with_capacity(max + 1);
        let mut acc = 0.0_f64;
        values.push(0.0);
        for k in 1..=max {
            acc += (k as f64).ln();
            values.push(acc);
        }
        // Cumulative sums drift for large k; re-anchor on ln_gamma every 256 entries.
        for k in (256..=max).step_by(256) {
            values[k] = ln_gamma(k as f64 + 1.0);
            for j in k + 1..(k + 256).min(max + 1) {
                values[j] = values[j - 1] + (j as f64).ln();
            }
        }
        Self { values }
    }

    pub fn max(&self) -> usize {
        self.values.len() - 1
    }

    /// `ln(n!)`, falling back to `ln_gamma` beyond the table.
    #[inline]
    pub fn get(&self, n: u32) -> f64 {
        self.values
            .get(n as usize)
            .copied()
            .unwrap_or_else(|| ln_gamma(f64::from(n) + 1.0))
    }

    /// `ln C(m, y)`; caller guarantees `y <= m`.
    #[inline]
    pub fn ln_choose(&self, m: u32, y: u32) -> f64 {
        self.get(m) - self.get(y) - self.get(m - y)
    }
}

fn shared_table() -> &'static LogFactorialTable {
    static TABLE: OnceLock<LogFactorialTable> = OnceLock::new();
    TABLE.get_or_init(|| LogFactorialTable::new(SHARED_TABLE_LEN))
}

#[inline]
pub fn ln_factorial(n: u32) -> f64 {
    shared_table().get(n)
}

#[inline]
pub fn ln_choose(m: u32, y: u32) -> f64 {
    shared_table().ln_choose(m, y)
}

#[inline]
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln(e^a + e^b)` without overflow; either argument may be `-inf`.
#[inline]
pub fn log_sum_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

#[inline]
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// `ln(logistic(x))`.
#[inline]
pub fn ln_logistic(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Natural log, treating `0` as `-inf` explicitly.
#[inline]
pub(crate) fn ln_or_neg_inf(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_table_matches_ln_gamma() {
        let t = LogFactorialTable::new(2000);
        for n in [0u32, 1, 2, 10, 170, 255, 256, 257, 1000, 2000, 5000] {
            let expected = ln_gamma(f64::from(n) + 1.0);
            assert!(
                (t.get(n) - expected).abs() <= 1e-12 * expected.max(1.0),
                "n={n}: {} vs {expected}",
                t.get(n)
            );
        }
        assert_eq!(t.max(), 2000);
    }

    #[test]
    fn choose_small_values() {
        assert!((ln_choose(10, 3).exp() - 120.0).abs() < 1e-10);
        assert_eq!(ln_choose(7, 0), 0.0);
        assert_eq!(ln_choose(7, 7), 0.0);
    }

    #[test]
    fn log_sum_exp_handles_infinities() {
        assert_eq!(log_sum_exp(f64::NEG_INFINITY, -3.0), -3.0);
        assert_eq!(log_sum_exp(-3.0, f64::NEG_INFINITY), -3.0);
        assert_eq!(
            log_sum_exp(f64::NEG_INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
        assert!((log_sum_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((log_sum_exp(1000.0, 1000.0) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn logistic_is_stable() {
        assert_eq!(logistic(0.0), 0.5);
        assert!(logistic(-800.0) >= 0.0);
        assert_eq!(logistic(800.0), 1.0);
        assert!((ln_logistic(-800.0) + 800.0).abs() < 1e-12);
        assert!((logit(logistic(0.6838)) - 0.6838).abs() < 1e-12);
    }
}
