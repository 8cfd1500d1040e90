use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tbbreg::cli::{
    cmd_check, cmd_compare, cmd_diagnose, cmd_fit, cmd_simulate, load_dataset, ModelEntry, RunConfig,
    SimulateConfig,
};
use tbbreg::regression::{Family, ModelSpec, Term};
use tbbreg::Result;

#[derive(Parser)]
#[command(name = "tbbreg", version, about = "Tilted beta binomial regression by MCMC")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one model and write summaries, chains, diagnostics and residuals.
    Fit(RunArgs),
    /// Fit several models and rank them by DIC.
    Compare(RunArgs),
    /// Draw a synthetic dataset.
    Simulate {
        /// TOML simulation configuration.
        #[arg(long)]
        config: PathBuf,
        /// CSV file to write.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the configuration.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Recompute diagnostics from the chains written by `fit`.
    Diagnose {
        /// Directory containing chains_<k>.csv.
        dir: PathBuf,
        /// Where to write the recomputed diagnostics; defaults to `dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the closed-form distributions against numerical oracles.
    Check,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV dataset with columns y, n and covariates.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Restrict to one family (bin, bb, brb, tbb).
    #[arg(long)]
    family: Option<Family>,
    /// Base seed; chain k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of chains.
    #[arg(long)]
    chains: Option<usize>,
    /// Iterations per chain, burn-in included.
    #[arg(long)]
    iters: Option<usize>,
    /// Burn-in iterations discarded from each chain.
    #[arg(long)]
    burnin: Option<usize>,
    /// Keep every thin-th draw after burn-in.
    #[arg(long)]
    thin: Option<usize>,
}

/// Without a config: every covariate enters the mean, intercepts elsewhere.
fn default_entry(family: Family, covariates: &[String]) -> Result<ModelEntry> {
    let mut mu_b = vec![Term::Intercept];
    mu_b.extend(covariates.iter().map(Term::covariate));
    let one = || vec![Term::Intercept];
    let phi = if family.has_dispersion() { one() } else { vec![] };
    let theta = if family.has_mixture() { one() } else { vec![] };
    Ok(ModelEntry::new(ModelSpec::new(family, mu_b, phi, theta)?))
}

impl RunArgs {
    fn resolve(&self, compare: bool) -> Result<RunConfig> {
        let mut cfg = match (&self.config, &self.data) {
            (Some(path), _) => RunConfig::load(path)?,
            (None, Some(data)) => {
                let covs = load_dataset(data)?.covariate_names().to_vec();
                let families: Vec<Family> = match (compare, self.family) {
                    (false, f) => vec![f.unwrap_or(Family::TiltedBetaBinomial)],
                    (true, _) => Family::ALL.to_vec(),
                };
                let models = families.into_iter().map(|f| default_entry(f, &covs)).collect::<Result<_>>()?;
                RunConfig::new(data, "out", models)
            }
            (None, None) => return Err(tbbreg::Error::Config("either --config or --data is required".into())),
        };
        if let Some(d) = &self.data {
            cfg.data = d.clone();
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        let s = &mut cfg.sampler;
        s.seed = self.seed.unwrap_or(s.seed);
        s.chains = self.chains.unwrap_or(s.chains);
        s.iterations = self.iters.unwrap_or(s.iterations);
        s.burn_in = self.burnin.unwrap_or(s.burn_in);
        s.thin = self.thin.unwrap_or(s.thin);
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Fit(args) => {
            let cfg = args.resolve(false)?;
            let report = cmd_fit(&cfg, args.family)?;
            print!("{}", report.summary_text());
            println!("outputs written to {}", cfg.out.display());
        }
        Command::Compare(args) => {
            let mut cfg = args.resolve(true)?;
            if let Some(f) = args.family {
                cfg.models.retain(|m| m.spec.family == f);
            }
            let table = cmd_compare(&cfg)?;
            print!("{}", table.to_text());
            println!("outputs written to {}", cfg.out.display());
        }
        Command::Simulate { config, out, seed } => {
            let mut cfg = SimulateConfig::load(&config)?;
            cfg.seed = seed.unwrap_or(cfg.seed);
            let data = cmd_simulate(&cfg, &out)?;
            println!("wrote {} rows to {}", data.len(), out.display());
        }
        Command::Diagnose { dir, out } => {
            let report = cmd_diagnose(&dir, out.as_deref())?;
            for p in &report.parameters {
                let r = p.r_hat.map_or_else(|| "-".into(), |r| format!("{r:.3}"));
                let z: Vec<String> = p.geweke_z.iter().map(|z| format!("{z:.2}")).collect();
                println!("{:<10} R {:>6}  Geweke Z [{}]", p.name, r, z.join(", "));
            }
            if let Some(note) = &report.r_hat_note {
                println!("note: {note}");
            }
        }
        Command::Check => {
            let report = cmd_check();
            print!("{}", report.to_text());
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
