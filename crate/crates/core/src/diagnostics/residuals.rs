use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mcmc::PosteriorSample;
use crate::regression::Model;

/// Pearson residual of one observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub index: usize,
    pub observed: u32,
    pub trials: u32,
    pub fitted_mean: f64,
    pub fitted_variance: f64,
    pub value: f64,
}

/// `(y_i − Ê(Y_i)) / √V̂(Y_i)` where `Ê` and `V̂` are posterior means of the
/// per-draw count mean and variance (not moments at the posterior mean).
pub fn pearson_residuals(model: &Model, posterior: &PosteriorSample) -> Result<Vec<Residual>> {
    let n = model.n_obs();
    let mut mean_acc = vec![0.0; n];
    let mut var_acc = vec![0.0; n];
    let mut draws = 0usize;
    for x in posterior.draws() {
        let obs = model.linear_predictors_stacked(x)?;
        for (i, o) in obs.iter().enumerate() {
            let (e, v) = o.count_moments(model.m()[i]);
            mean_acc[i] += e;
            var_acc[i] += v;
        }
        draws += 1;
    }
    if draws == 0 {
        return Err(Error::Diagnostics("posterior sample has no draws".into()));
    }
    let d = draws as f64;
    (0..n)
        .map(|i| {
            let fitted_mean = mean_acc[i] / d;
            let fitted_variance = var_acc[i] / d;
            if !(fitted_variance > 0.0) {
                return Err(Error::Diagnostics(format!(
                    "observation {} has zero fitted variance",
                    i + 1
                )));
            }
            let observed = model.y()[i];
            Ok(Residual {
                index: i,
                observed,
                trials: model.m()[i],
                fitted_mean,
                fitted_variance,
                value: (f64::from(observed) - fitted_mean) / fitted_variance.sqrt(),
            })
        })
        .collect()
}
