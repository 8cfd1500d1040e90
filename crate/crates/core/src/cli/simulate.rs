use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::distributions::{sample_tbb, TiltedBetaBinomialParams};
use crate::error::{Error, Result};
use crate::regression::{Dataset, Model};

use super::config::SimulateConfig;
use super::data::write_dataset;

fn covariate_columns(cfg: &SimulateConfig, rng: &mut ChaCha8Rng) -> Result<Vec<(String, Vec<f64>)>> {
    cfg.covariates
        .iter()
        .map(|g| {
            let col = match (&g.levels, g.uniform) {
                (Some(levels), None) if !levels.is_empty() => {
                    (0..cfg.rows).map(|i| levels[i % levels.len()]).collect()
                }
                (None, Some([lo, hi])) if lo < hi => (0..cfg.rows).map(|_| rng.random_range(lo..hi)).collect(),
                _ => {
                    return Err(Error::Config(format!(
                        "covariate `{}` needs exactly one of a non-empty `levels` list or a `uniform = [lo, hi]` range",
                        g.name
                    )))
                }
            };
            Ok((g.name.clone(), col))
        })
        .collect()
}

/// Draw a synthetic dataset: covariates from their generators, then each count
/// from the model's distribution at the given coefficients.
pub fn simulate(cfg: &SimulateConfig) -> Result<Dataset> {
    if cfg.rows == 0 || cfg.trials == 0 {
        return Err(Error::Config("rows and trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let covs = covariate_columns(cfg, &mut rng)?;
    let m = vec![cfg.trials; cfg.rows];
    let shell = Dataset::new(vec![0; cfg.rows], m.clone(), covs.clone())?;
    let model = Model::new(&cfg.model, &shell)?;
    let obs = model.linear_predictors(&cfg.params)?;
    let y = obs
        .iter()
        .map(|o| {
            if o.phi.is_infinite() {
                let b = Binomial::new(u64::from(cfg.trials), o.mu_b).map_err(|e| Error::Domain(e.to_string()))?;
                Ok(b.sample(&mut rng) as u32)
            } else {
                let p = TiltedBetaBinomialParams::from_values(o.mu_t, o.mu_b, o.phi, o.theta, cfg.trials)?;
                Ok(sample_tbb(&p, &mut rng))
            }
        })
        .collect::<Result<Vec<u32>>>()?;
    Dataset::new(y, m, covs)
}

/// `simulate`: write a synthetic dataset to `out` in the format read by
/// [`load_dataset`](super::load_dataset).
pub fn cmd_simulate(cfg: &SimulateConfig, out: &Path) -> Result<Dataset> {
    let data = simulate(cfg)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = std::fs::File::create(out).map_err(|e| Error::io(out, e))?;
    write_dataset(&data, std::io::BufWriter::new(file))?;
    Ok(data)
}
