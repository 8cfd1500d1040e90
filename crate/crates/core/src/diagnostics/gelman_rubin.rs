use crate::error::{Error, Result};

use super::summary::mean;

/// Brooks-Gelman-Rubin scale reduction factor.
///
/// With `m` chains of length `n`, `W` the mean within-chain variance and
/// `B/n` the variance of the chain means,
/// `V̂ = (n−1)/n·W + (m+1)/m·B/n` and `R = V̂ / ((n−1)/n·W)`. The denominator
/// is the pooled within-chain variance with divisor `n`, so `R ≥ 1` with
/// equality exactly when all chain means coincide.
pub fn gelman_rubin_r(chains: &[Vec<f64>]) -> Result<f64> {
    let m = chains.len();
    if m < 2 {
        return Err(Error::Diagnostics(format!("Gelman-Rubin needs at least 2 chains, got {m}")));
    }
    let n = chains[0].len();
    if chains.iter().any(|c| c.len() != n) {
        return Err(Error::Diagnostics("Gelman-Rubin chains must have equal lengths".into()));
    }
    if n < 10 {
        return Err(Error::Diagnostics(format!("Gelman-Rubin chains need at least 10 draws, got {n}")));
    }
    let (mf, nf) = (m as f64, n as f64);
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let grand = mean(&means);
    let b_over_n = means.iter().map(|x| (x - grand) * (x - grand)).sum::<f64>() / (mf - 1.0);
    let w = chains
        .iter()
        .zip(&means)
        .map(|(c, mu)| c.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (nf - 1.0))
        .sum::<f64>()
        / mf;
    let shrunk = (nf - 1.0) / nf * w;
    if shrunk == 0.0 {
        return Ok(if b_over_n == 0.0 { 1.0 } else { f64::INFINITY });
    }
    let v_hat = shrunk + (mf + 1.0) / mf * b_over_n;
    Ok(v_hat / shrunk)
}

/// `R` against iteration: for each of `bins` end points, computed on the
/// second half of the draws up to that point.
pub fn gelman_rubin_plot(chains: &[Vec<f64>], bins: usize) -> Result<Vec<(usize, f64)>> {
    let n = chains.first().map_or(0, Vec::len);
    let bins = bins.max(1);
    let mut out = Vec::with_capacity(bins);
    for k in 1..=bins {
        let end = k * n / bins;
        let start = end / 2;
        if end - start < 10 {
            continue;
        }
        let windows: Vec<Vec<f64>> = chains.iter().map(|c| c.get(start..end).unwrap_or(&[]).to_vec()).collect();
        out.push((end, gelman_rubin_r(&windows)?));
    }
    if out.is_empty() {
        return Err(Error::Diagnostics("chains too short for a Gelman-Rubin plot".into()));
    }
    Ok(out)
}
