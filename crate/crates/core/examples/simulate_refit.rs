// Simulate beta-binomial data from known coefficients and recover them.

use tbbreg::cli::{simulate, CovariateGenerator, SimulateConfig};
use tbbreg::mcmc::{run_chains, PriorSpec, SamplerConfig};
use tbbreg::regression::{Family, Model, ModelSpec, ParameterVector};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ModelSpec::parse(Family::BetaBinomial, &["1", "dose"], &["1"], &[])?;
    let truth = ParameterVector { beta: vec![-0.3, 0.8], gamma: vec![2.0], delta: vec![], mu_t: None };
    let cfg = SimulateConfig {
        rows: 60,
        trials: 25,
        seed: 11,
        covariates: vec![CovariateGenerator { name: "dose".into(), levels: None, uniform: Some([-1.5, 1.5]) }],
        model: spec.clone(),
        params: truth.clone(),
    };
    let data = simulate(&cfg)?;
    println!("simulated {} rows, total successes {}", data.len(), data.y().iter().sum::<u32>());

    let model = Model::new(&spec, &data)?;
    let sampler = SamplerConfig { iterations: 12_000, burn_in: 2_000, thin: 5, ..SamplerConfig::default() };
    let posterior = run_chains(&model, &PriorSpec::default(), &sampler)?;
    for (k, (name, t)) in posterior.names.iter().zip(truth.stacked()).enumerate() {
        let mut x = posterior.param_pooled(k);
        x.sort_by(f64::total_cmp);
        let q = |p: f64| tbbreg::diagnostics::quantile(&x, p);
        println!("{name:<7} true {t:>6.3}  posterior 95% interval ({:.3}, {:.3})", q(0.025), q(0.975));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
