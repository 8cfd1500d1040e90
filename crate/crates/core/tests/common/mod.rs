#![allow(dead_code)]

use tbbreg::diagnostics::{mc_error, mean};
use tbbreg::mcmc::{run_target_chains, Block, Evaluation, SamplerConfig, Target};

/// Bivariate normal with mean (1, −2), sds (1, 2), correlation 0.6.
struct Gaussian;

const MU: [f64; 2] = [1.0, -2.0];
const COV: [f64; 4] = [1.0, 1.2, 1.2, 4.0];

impl Target for Gaussian {
    fn dim(&self) -> usize {
        2
    }
    fn blocks(&self) -> Vec<Block> {
        vec![Block::new("x", 0..2)]
    }
    fn evaluate(&self, x: &[f64]) -> Evaluation {
        let det = COV[0] * COV[3] - COV[1] * COV[2];
        let (a, b) = (x[0] - MU[0], x[1] - MU[1]);
        let q = (COV[3] * a * a - 2.0 * COV[1] * a * b + COV[0] * b * b) / det;
        Evaluation { log_posterior: -0.5 * q, log_likelihood: -0.5 * q }
    }
}

/// Posterior mean and covariance of [`Gaussian`] agree with the truth to
/// within three batch-means Monte Carlo standard errors.
pub fn gaussian_target_check() -> Vec<(String, f64, f64, f64)> {
    let cfg = SamplerConfig { iterations: 60_000, burn_in: 10_000, thin: 5, chains: 3, seed: 42, ..SamplerConfig::default() };
    let inits = vec![vec![0.0, 0.0], vec![3.0, -5.0], vec![-1.0, 1.0]];
    let chains = run_target_chains(&Gaussian, &inits, &cfg).unwrap();
    let pooled = |k: usize| -> Vec<f64> { chains.iter().flat_map(|c| c.column(k)).collect() };
    let x = [pooled(0), pooled(1)];
    let mut out = Vec::new();
    for i in 0..2 {
        let se = mc_error(&x[i]).unwrap().batch_means;
        out.push((format!("mean[{i}]"), mean(&x[i]), MU[i], se));
    }
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let prod: Vec<f64> = x[i].iter().zip(&x[j]).map(|(a, b)| (a - MU[i]) * (b - MU[j])).collect();
        let se = mc_error(&prod).unwrap().batch_means;
        out.push((format!("cov[{i}{j}]"), mean(&prod), COV[i * 2 + j], se));
    }
    out
}


/// Simulate beta-binomial data (no tilted component) from a known intercept
/// and refit it; returns whether the 95% interval of `μ_b` covered the truth
/// for each replication.
pub fn calibration_coverage(replications: u64) -> Vec<bool> {
    use tbbreg::cli::{simulate, SimulateConfig};
    use tbbreg::diagnostics::quantile;
    use tbbreg::mcmc::{run_chains, PriorSpec};
    use tbbreg::regression::{Family, Model, ModelSpec, ParameterVector};
    use tbbreg::special::logistic;

    let spec = ModelSpec::parse(Family::BetaBinomial, &["1"], &["1"], &[]).unwrap();
    let truth = ParameterVector { beta: vec![-0.6], gamma: vec![2.0], delta: vec![], mu_t: None };
    let mu_b = logistic(truth.beta[0]);
    let sampler = SamplerConfig { iterations: 8_000, burn_in: 2_000, thin: 5, ..SamplerConfig::default() };
    (1..=replications)
        .map(|seed| {
            let cfg = SimulateConfig {
                rows: 30,
                trials: 20,
                seed,
                covariates: vec![],
                model: spec.clone(),
                params: truth.clone(),
            };
            let data = simulate(&cfg).unwrap();
            let model = Model::new(&spec, &data).unwrap();
            let post = run_chains(&model, &PriorSpec::default(), &SamplerConfig { seed: 1000 + seed, ..sampler.clone() }).unwrap();
            let mut m: Vec<f64> = post.param_pooled(0).into_iter().map(logistic).collect();
            m.sort_by(f64::total_cmp);
            quantile(&m, 0.025) <= mu_b && mu_b <= quantile(&m, 0.975)
        })
        .collect()
}
