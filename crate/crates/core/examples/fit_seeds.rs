// Fit the TBB regression to the seeds germination data.
//
// `cargo run --release --example fit_seeds -- full` runs the full
// 3 x 100000-iteration analysis; without an argument a shorter run is used.

use tbbreg::cli::{analyse, ModelEntry};
use tbbreg::mcmc::{run_chains, PriorSpec, SamplerConfig};
use tbbreg::regression::{Family, Model};
use tbbreg::seeds;

pub fn fit(sampler: &SamplerConfig) -> Result<(), Box<dyn std::error::Error>> {
    let data = seeds::dataset();
    let entry = ModelEntry::new(seeds::model_spec(Family::TiltedBetaBinomial)?);
    let model = Model::new(&entry.spec, &data)?;
    let prior = PriorSpec::default();
    let posterior = run_chains(&model, &prior, sampler)?;
    let report = analyse(&entry.label(), &model, &prior, sampler, &posterior)?;
    print!("{}", report.summary_text());
    let res = &report.diagnostics.residuals;
    let lo = res.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let hi = res.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    println!("Pearson residuals range ({lo:.3}, {hi:.3})");
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    fit(&SamplerConfig { iterations: 12_000, burn_in: 2_000, thin: 5, ..SamplerConfig::default() })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    if std::env::args().nth(1).as_deref() == Some("full") {
        fit(&SamplerConfig::default())
    } else {
        run_example()
    }
}
