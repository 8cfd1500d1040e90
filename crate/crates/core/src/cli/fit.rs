use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    gelman_rubin_plot, geweke_plot, pearson_residuals, DiagnosticsReport, McError, Residual, Summary,
};
use crate::error::{Error, Result};
use crate::mcmc::{run_chains, ChainDraws, PosteriorSample, PriorSpec, SamplerConfig};
use crate::model_selection::{deviance_summary, dic, ComparisonRow, ComparisonTable, DevianceSummary, Dic};
use crate::regression::{Dataset, Model, ModelSpec};

use super::config::{ModelEntry, RunConfig};
use super::data::load_dataset;

/// Maximum autocorrelation lag kept in the diagnostics report.
pub const REPORT_MAX_LAG: usize = 50;
/// Number of points in the Geweke and Gelman-Rubin plot series.
pub const PLOT_BINS: usize = 20;

/// One row of the posterior summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterRow {
    pub name: String,
    pub summary: Summary,
    pub mc_error: McError,
}

/// Everything produced by fitting one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub label: String,
    pub spec: ModelSpec,
    pub sampler: SamplerConfig,
    pub prior: PriorSpec,
    pub parameters: Vec<ParameterRow>,
    pub deviance: DevianceSummary,
    pub deviance_mc_error: McError,
    pub dic: Dic,
    pub diagnostics: DiagnosticsReport,
}

impl FitReport {
    pub fn parameter(&self, name: &str) -> Option<&ParameterRow> {
        self.parameters.iter().find(|p| p.name == name)
    }

    /// Posterior summary laid out as mean, s.d., 95% interval and MC error,
    /// with the deviance as the last row.
    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} model, {} chains x {} retained draws", self.label, self.diagnostics.chains, self.diagnostics.retained_per_chain);
        let _ = writeln!(s, "{:<10} {:>10} {:>10} {:>24} {:>10} {:>7}", "parameter", "mean", "sd", "95% interval", "MC error", "R");
        let row = |s: &mut String, name: &str, sm: &Summary, mc: &McError, r: Option<f64>| {
            let interval = format!("({:.4}, {:.4})", sm.q025, sm.q975);
            let r = r.map_or_else(|| "-".to_string(), |r| format!("{r:.3}"));
            let _ = writeln!(s, "{:<10} {:>10.4} {:>10.4} {:>24} {:>10.5} {:>7}", name, sm.mean, sm.sd, interval, mc.batch_means, r);
        };
        for (p, d) in self.parameters.iter().zip(&self.diagnostics.parameters) {
            row(&mut s, &p.name, &p.summary, &p.mc_error, d.r_hat);
        }
        row(&mut s, "deviance", &self.diagnostics.deviance.summary, &self.deviance_mc_error, self.diagnostics.deviance.r_hat);
        let _ = writeln!(s, "DIC {:.2}  pD {:.2}  Dbar {:.2}  Dhat {:.2}", self.dic.dic, self.dic.p_d, self.dic.d_bar, self.dic.d_hat);
        if let Some(note) = &self.diagnostics.r_hat_note {
            let _ = writeln!(s, "note: {note}");
        }
        s
    }

    /// Same content as [`FitReport::summary_text`] at full precision.
    pub fn summary_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["parameter", "mean", "sd", "q025", "median", "q975", "mc_error_naive", "mc_error_batch", "r_hat"])?;
        let mut put = |name: &str, sm: &Summary, mc: &McError, r: Option<f64>| {
            w.write_record([
                name.to_string(),
                sm.mean.to_string(),
                sm.sd.to_string(),
                sm.q025.to_string(),
                sm.median.to_string(),
                sm.q975.to_string(),
                mc.naive.to_string(),
                mc.batch_means.to_string(),
                r.map_or_else(String::new, |r| r.to_string()),
            ])
        };
        for (p, d) in self.parameters.iter().zip(&self.diagnostics.parameters) {
            put(&p.name, &p.summary, &p.mc_error, d.r_hat)?;
        }
        put("deviance", &self.diagnostics.deviance.summary, &self.deviance_mc_error, self.diagnostics.deviance.r_hat)?;
        into_string(w)
    }
}

pub(crate) fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

/// Post-process a posterior sample into a [`FitReport`] and residuals.
pub fn analyse(label: &str, model: &Model, prior: &PriorSpec, sampler: &SamplerConfig, posterior: &PosteriorSample) -> Result<FitReport> {
    let residuals = pearson_residuals(model, posterior)?;
    let diagnostics = DiagnosticsReport::from_posterior(posterior, REPORT_MAX_LAG)?.with_residuals(residuals);
    let parameters = diagnostics
        .parameters
        .iter()
        .map(|p| ParameterRow { name: p.name.clone(), summary: p.summary, mc_error: p.mc_error })
        .collect();
    Ok(FitReport {
        label: label.to_string(),
        spec: model.spec().clone(),
        sampler: sampler.clone(),
        prior: *prior,
        parameters,
        deviance: deviance_summary(&posterior.deviance_pooled())?,
        deviance_mc_error: diagnostics.deviance.mc_error,
        dic: dic(posterior, model)?,
        diagnostics,
    })
}

/// Fit one model and return the report with the raw draws.
pub fn fit_model(entry: &ModelEntry, data: &Dataset, prior: &PriorSpec, sampler: &SamplerConfig) -> Result<(FitReport, PosteriorSample)> {
    let model = Model::new(&entry.spec, data)?;
    let posterior = run_chains(&model, prior, sampler)?;
    let report = analyse(&entry.label(), &model, prior, sampler, &posterior)?;
    Ok((report, posterior))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Retained draws of one chain: `iteration`, the parameters, `deviance`.
pub fn chain_csv(names: &[String], chain: &ChainDraws, thin: usize, burn_in: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["iteration".to_string()];
    header.extend(names.iter().cloned());
    header.push("deviance".into());
    w.write_record(&header)?;
    for (k, (d, dev)) in chain.draws.iter().zip(&chain.deviance).enumerate() {
        let mut rec = vec![(burn_in + (k + 1) * thin).to_string()];
        rec.extend(d.iter().map(f64::to_string));
        rec.push(dev.to_string());
        w.write_record(&rec)?;
    }
    into_string(w)
}

/// Parse a file written by [`chain_csv`] into `(names, draws, deviance)`.
pub fn parse_chain_csv(text: &str, source: &str) -> Result<(Vec<String>, Vec<Vec<f64>>, Vec<f64>)> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let n = headers.len();
    if n < 3 || &headers[0] != "iteration" || &headers[n - 1] != "deviance" {
        return Err(Error::Data { line: 1, message: format!("{source}: expected columns iteration, parameters..., deviance") });
    }
    let names = headers.iter().skip(1).take(n - 2).map(str::to_string).collect();
    let mut draws = Vec::new();
    let mut deviance = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let vals = rec
            .iter()
            .skip(1)
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Data { line, message: format!("{source}: {e}") })?;
        deviance.push(vals[n - 2]);
        draws.push(vals[..n - 2].to_vec());
    }
    Ok((names, draws, deviance))
}

fn residuals_csv(res: &[Residual]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "y", "n", "fitted_mean", "fitted_variance", "residual"])?;
    for r in res {
        w.write_record([
            (r.index + 1).to_string(),
            r.observed.to_string(),
            r.trials.to_string(),
            r.fitted_mean.to_string(),
            r.fitted_variance.to_string(),
            r.value.to_string(),
        ])?;
    }
    into_string(w)
}

fn plot_csvs(posterior: &PosteriorSample) -> Result<(String, String)> {
    let mut gw = csv::Writer::from_writer(Vec::new());
    gw.write_record(["parameter", "chain", "iterations_discarded", "z"])?;
    let mut bw = csv::Writer::from_writer(Vec::new());
    bw.write_record(["parameter", "draws", "r_hat"])?;
    let series: Vec<(String, Vec<Vec<f64>>)> = (0..posterior.n_params())
        .map(|p| (posterior.names[p].clone(), posterior.param_chains(p)))
        .chain(std::iter::once(("deviance".to_string(), posterior.deviance_chains())))
        .collect();
    for (name, chains) in &series {
        for (c, chain) in chains.iter().enumerate() {
            if let Ok(points) = geweke_plot(chain, 0.1, 0.5, PLOT_BINS) {
                for (start, z) in points {
                    gw.write_record([name.clone(), (c + 1).to_string(), start.to_string(), z.to_string()])?;
                }
            }
        }
        if chains.len() >= 2 {
            if let Ok(points) = gelman_rubin_plot(chains, PLOT_BINS) {
                for (len, r) in points {
                    bw.write_record([name.clone(), len.to_string(), r.to_string()])?;
                }
            }
        }
    }
    Ok((into_string(gw)?, into_string(bw)?))
}

/// Description of a persisted fit, enough for `diagnose` to rebuild the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitManifest {
    pub label: String,
    pub data: PathBuf,
    pub model: ModelSpec,
    pub prior: PriorSpec,
    pub sampler: SamplerConfig,
}

pub const MANIFEST_FILE: &str = "fit.json";

/// Write every artifact of a fit into `dir`.
pub fn write_fit_outputs(dir: &Path, report: &FitReport, posterior: &PosteriorSample, data_path: &Path) -> Result<()> {
    create_dir(dir)?;
    write_file(&dir.join("summary.txt"), &report.summary_text())?;
    write_file(&dir.join("summary.csv"), &report.summary_csv()?)?;
    for (k, c) in posterior.chains.iter().enumerate() {
        let text = chain_csv(&posterior.names, c, report.sampler.thin, report.sampler.burn_in)?;
        write_file(&dir.join(format!("chains_{}.csv", k + 1)), &text)?;
    }
    write_diagnostics_outputs(dir, &report.diagnostics, posterior)?;
    let manifest = FitManifest {
        label: report.label.clone(),
        data: data_path.to_path_buf(),
        model: report.spec.clone(),
        prior: report.prior,
        sampler: report.sampler.clone(),
    };
    write_file(&dir.join(MANIFEST_FILE), &serde_json::to_string_pretty(&manifest)?)?;
    let dic = serde_json::json!({ "dic": report.dic, "deviance": report.deviance });
    write_file(&dir.join("dic.json"), &serde_json::to_string_pretty(&dic)?)?;
    Ok(())
}

pub(crate) fn write_diagnostics_outputs(dir: &Path, diag: &DiagnosticsReport, posterior: &PosteriorSample) -> Result<()> {
    write_file(&dir.join("diagnostics.json"), &serde_json::to_string_pretty(diag)?)?;
    if !diag.residuals.is_empty() {
        write_file(&dir.join("residuals.csv"), &residuals_csv(&diag.residuals)?)?;
    }
    let (geweke, bgr) = plot_csvs(posterior)?;
    write_file(&dir.join("geweke.csv"), &geweke)?;
    if posterior.n_chains() >= 2 {
        write_file(&dir.join("gelman_rubin.csv"), &bgr)?;
    }
    Ok(())
}

/// `fit`: run the selected model (the first `[[model]]` entry, or the one
/// chosen by family) and persist all outputs under `config.out`.
pub fn cmd_fit(config: &RunConfig, family: Option<crate::regression::Family>) -> Result<FitReport> {
    let data = load_dataset(&config.data)?;
    config.validate(&data)?;
    let entry = config.select(family)?[0];
    let (report, posterior) = fit_model(entry, &data, &config.prior, &config.sampler)?;
    write_fit_outputs(&config.out, &report, &posterior, &config.data)?;
    Ok(report)
}

/// `compare`: fit every `[[model]]` entry with the same sampler settings and
/// rank them by DIC. A failed fit produces a failed row.
pub fn cmd_compare(config: &RunConfig) -> Result<ComparisonTable> {
    if config.models.len() < 2 {
        return Err(Error::Config(format!(
            "compare needs at least two [[model]] entries, got {}",
            config.models.len()
        )));
    }
    let data = load_dataset(&config.data)?;
    config.sampler.validate()?;
    config.prior.validate()?;
    let rows = config
        .models
        .iter()
        .map(|entry| {
            let label = entry.label();
            match fit_model(entry, &data, &config.prior, &config.sampler) {
                Ok((rep, _)) => ComparisonRow::ok(label, rep.dic, rep.deviance),
                Err(e) => ComparisonRow::failed(label, e.to_string()),
            }
        })
        .collect();
    let table = ComparisonTable::new(rows);
    create_dir(&config.out)?;
    write_file(&config.out.join("comparison.csv"), &table.to_csv()?)?;
    write_file(&config.out.join("comparison.txt"), &table.to_text())?;
    Ok(table)
}

/// `diagnose`: re-run diagnostics on the chains persisted in `dir` by `fit`,
/// writing the refreshed reports into `out` (defaults to `dir`).
pub fn cmd_diagnose(dir: &Path, out: Option<&Path>) -> Result<DiagnosticsReport> {
    let mut files: Vec<(usize, PathBuf)> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter_map(|p| {
            let name = p.file_name()?.to_str()?;
            let k = name.strip_prefix("chains_")?.strip_suffix(".csv")?.parse().ok().filter(|&k: &usize| k >= 1)?;
            Some((k, p))
        })
        .collect();
    if files.is_empty() {
        return Err(Error::Config(format!("no chains_<k>.csv files in {}", dir.display())));
    }
    files.sort();
    let mut names = Vec::new();
    let mut chains = Vec::new();
    for (k, path) in &files {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let (n, draws, deviance) = parse_chain_csv(&text, &path.display().to_string())?;
        names = n;
        chains.push(ChainDraws {
            chain: k - 1,
            initial: Vec::new(),
            draws,
            deviance,
            block_names: Vec::new(),
            acceptance: Vec::new(),
            scales: Vec::new(),
            adaptation_log: Vec::new(),
        });
    }
    let posterior = PosteriorSample::new(names, chains)?;
    let mut report = DiagnosticsReport::from_posterior(&posterior, REPORT_MAX_LAG)?;
    let manifest_path = dir.join(MANIFEST_FILE);
    if manifest_path.exists() {
        let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
        let manifest: FitManifest = serde_json::from_str(&text)?;
        let data = load_dataset(&manifest.data)?;
        let model = Model::new(&manifest.model, &data)?;
        report = report.with_residuals(pearson_residuals(&model, &posterior)?);
    }
    let out = out.unwrap_or(dir);
    create_dir(out)?;
    write_diagnostics_outputs(out, &report, &posterior)?;
    Ok(report)
}
