// Convergence diagnostics on a fitted model: Gelman-Rubin R, per-chain
// Geweke Z, autocorrelations, Monte Carlo errors and plot series.

use tbbreg::diagnostics::{autocorrelation, gelman_rubin_plot, geweke_plot, DiagnosticsReport};
use tbbreg::mcmc::{run_chains, PriorSpec, SamplerConfig};
use tbbreg::regression::{Family, Model};
use tbbreg::seeds;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = Model::new(&seeds::model_spec(Family::BetaBinomial)?, &seeds::dataset())?;
    let sampler = SamplerConfig { iterations: 12_000, burn_in: 2_000, thin: 5, ..SamplerConfig::default() };
    let posterior = run_chains(&model, &PriorSpec::default(), &sampler)?;
    let report = DiagnosticsReport::from_posterior(&posterior, 10)?;

    println!("{:<8} {:>7} {:>24} {:>10} {:>10}", "param", "R", "Geweke Z per chain", "MCSE", "acf(1)");
    for p in &report.parameters {
        let z: Vec<String> = p.geweke_z.iter().map(|z| format!("{z:+.2}")).collect();
        println!(
            "{:<8} {:>7.4} {:>24} {:>10.5} {:>10.3}",
            p.name,
            p.r_hat.unwrap_or(f64::NAN),
            z.join(" "),
            p.mc_error.batch_means,
            p.autocorrelation[&1]
        );
    }
    for (c, chain) in posterior.chains.iter().enumerate() {
        let names = chain.block_names.join("/");
        let acc: Vec<String> = chain.acceptance.iter().map(|a| format!("{a:.2}")).collect();
        println!("chain {} acceptance {names}: {}", c + 1, acc.join(" "));
    }

    let beta1 = posterior.param_chains(0);
    println!("R for beta1 as draws accumulate:");
    for (n, r) in gelman_rubin_plot(&beta1, 5)? {
        println!("  {n:>5} draws  R = {r:.4}");
    }
    println!("Geweke Z for beta1, chain 1, after discarding leading draws:");
    for (start, z) in geweke_plot(&beta1[0], 0.1, 0.5, 5)? {
        println!("  {start:>5} discarded  Z = {z:+.3}");
    }
    let acf = autocorrelation(&beta1[0], 5)?;
    println!("beta1 autocorrelation lags 0..5: {:?}", acf.iter().map(|a| (a * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
