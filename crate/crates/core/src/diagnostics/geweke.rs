use crate::error::{Error, Result};

use super::summary::mean;

/// Spectral density at frequency zero, Bartlett lag window with truncation
/// `⌊0.5·√n⌋`.
pub fn spectral_density_at_zero(x: &[f64]) -> f64 {
    let n = x.len();
    let m = mean(x);
    let lags = (0.5 * (n as f64).sqrt()).floor() as usize;
    let autocov = |k: usize| -> f64 {
        x[..n - k]
            .iter()
            .zip(&x[k..])
            .map(|(a, b)| (a - m) * (b - m))
            .sum::<f64>()
            / n as f64
    };
    let mut s = autocov(0);
    for k in 1..=lags.min(n - 1) {
        s += 2.0 * (1.0 - k as f64 / (lags + 1) as f64) * autocov(k);
    }
    s.max(0.0)
}

/// Geweke Z: difference between the mean of the first `first_frac` and the
/// last `last_frac` of the chain, standardized by spectral variance estimates.
pub fn geweke_z(chain: &[f64], first_frac: f64, last_frac: f64) -> Result<f64> {
    if chain.len() < 100 {
        return Err(Error::Diagnostics(format!(
            "Geweke diagnostic needs at least 100 draws, got {}",
            chain.len()
        )));
    }
    let valid = |f: f64| f > 0.0 && f < 1.0;
    if !valid(first_frac) || !valid(last_frac) || first_frac + last_frac > 1.0 {
        return Err(Error::Config(format!(
            "Geweke windows {first_frac} and {last_frac} must be in (0, 1) and not overlap"
        )));
    }
    let n = chain.len();
    let na = ((first_frac * n as f64).floor() as usize).max(2);
    let nb = ((last_frac * n as f64).floor() as usize).max(2);
    let a = &chain[..na];
    let b = &chain[n - nb..];
    let diff = mean(a) - mean(b);
    let var = spectral_density_at_zero(a) / na as f64 + spectral_density_at_zero(b) / nb as f64;
    Ok(if var > 0.0 {
        diff / var.sqrt()
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    })
}

/// Geweke-Brooks plot data: `(first retained index, Z)` after discarding
/// increasing leading segments, up to half the chain, in `bins` steps.
pub fn geweke_plot(chain: &[f64], first_frac: f64, last_frac: f64, bins: usize) -> Result<Vec<(usize, f64)>> {
    let n = chain.len();
    let bins = bins.max(2);
    let mut out = Vec::with_capacity(bins);
    for k in 0..bins {
        let start = k * (n / 2) / (bins - 1);
        if n - start < 100 {
            break;
        }
        out.push((start, geweke_z(&chain[start..], first_frac, last_frac)?));
    }
    if out.is_empty() {
        return Err(Error::Diagnostics("chain too short for a Geweke plot".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_chain_is_zero() {
        assert_eq!(geweke_z(&[3.0; 500], 0.1, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn mean_shift_is_detected() {
        let chain: Vec<f64> = (0..2000)
            .map(|i| if i < 1000 { 0.0 } else { 5.0 } + ((i * 7919) % 13) as f64 / 13.0)
            .collect();
        assert!(geweke_z(&chain, 0.1, 0.5).unwrap().abs() > 10.0);
    }

    #[test]
    fn window_errors() {
        let c = vec![0.0; 200];
        assert!(matches!(geweke_z(&c, 0.6, 0.5), Err(Error::Config(_))));
        assert!(geweke_z(&c, 0.0, 0.5).is_err());
        assert!(geweke_z(&c[..50], 0.1, 0.5).is_err());
    }

    #[test]
    fn white_noise_spectrum_is_variance() {
        // Alternating ±1: lag-k autocovariances alternate in sign.
        let x: Vec<f64> = (0..400).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let s = spectral_density_at_zero(&x);
        assert!((0.0..1.0).contains(&s));
    }

    #[test]
    fn plot_segments() {
        let chain: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64).collect();
        let segs = geweke_plot(&chain, 0.1, 0.5, 20).unwrap();
        assert_eq!(segs.len(), 20);
        assert_eq!(segs[0].0, 0);
        assert!(segs.last().unwrap().0 <= 500);
    }
}
