//! Deviance summaries, DIC and cross-family comparison tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{mean, quantile, std_dev};
use crate::error::{Error, Result};
use crate::mcmc::PosteriorSample;
use crate::regression::Model;

/// Deviance information criterion and its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dic {
    pub dic: f64,
    pub p_d: f64,
    /// Posterior mean deviance.
    pub d_bar: f64,
    /// Deviance at the coordinatewise posterior mean.
    pub d_hat: f64,
}

/// `DIC = 2·D̄ − D(θ̄)` with `θ̄` the posterior mean of the stacked parameter
/// vector on the sampling scale.
pub fn dic(posterior: &PosteriorSample, model: &Model) -> Result<Dic> {
    let trace = posterior.deviance_pooled();
    if trace.is_empty() {
        return Err(Error::Diagnostics("posterior sample has no deviance trace".into()));
    }
    let d_bar = mean(&trace);
    let d_hat = model.deviance_stacked(&posterior.posterior_mean())?;
    if !d_hat.is_finite() {
        return Err(Error::Diagnostics(format!(
            "deviance at the posterior mean is not finite ({d_hat})"
        )));
    }
    Ok(Dic { dic: 2.0 * d_bar - d_hat, p_d: d_bar - d_hat, d_bar, d_hat })
}

/// Mean, standard deviation, median and central 95% interval of a deviance trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DevianceSummary {
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub median: f64,
    pub q975: f64,
}

/// Quantiles use type-7 interpolation of order statistics.
pub fn deviance_summary(trace: &[f64]) -> Result<DevianceSummary> {
    if trace.len() < 2 {
        return Err(Error::Diagnostics(format!(
            "deviance summary needs at least 2 values, got {}",
            trace.len()
        )));
    }
    if trace.iter().any(|d| d.is_nan()) {
        return Err(Error::Diagnostics("deviance trace contains NaN".into()));
    }
    let mut sorted = trace.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(DevianceSummary {
        mean: mean(trace),
        sd: std_dev(trace),
        q025: quantile(&sorted, 0.025),
        median: quantile(&sorted, 0.5),
        q975: quantile(&sorted, 0.975),
    })
}

/// Outcome of fitting one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RowStatus {
    Ok { dic: Dic, deviance: DevianceSummary },
    Failed { message: String },
}

/// One line of a model comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub label: String,
    pub status: RowStatus,
}

impl ComparisonRow {
    pub fn ok(label: impl Into<String>, dic: Dic, deviance: DevianceSummary) -> Self {
        Self { label: label.into(), status: RowStatus::Ok { dic, deviance } }
    }

    pub fn failed(label: impl Into<String>, message: impl Into<String>) -> Self {
        Self { label: label.into(), status: RowStatus::Failed { message: message.into() } }
    }

    pub fn dic(&self) -> Option<&Dic> {
        match &self.status {
            RowStatus::Ok { dic, .. } => Some(dic),
            RowStatus::Failed { .. } => None,
        }
    }

    pub fn deviance(&self) -> Option<&DevianceSummary> {
        match &self.status {
            RowStatus::Ok { deviance, .. } => Some(deviance),
            RowStatus::Failed { .. } => None,
        }
    }
}

/// Rows ordered by DIC ascending; failed rows last, in input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn new(mut rows: Vec<ComparisonRow>) -> Self {
        rows.sort_by(|a, b| match (a.dic(), b.dic()) {
            (Some(x), Some(y)) => x.dic.total_cmp(&y.dic),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        });
        Self { rows }
    }

    pub fn row(&self, label: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Labels in table order.
    pub fn ranking(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.label.as_str()).collect()
    }

    /// Aligned text table, rounded for display.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8} {:>9} {:>8} {:>9} {:>8} {:>20} {:>9}",
            "model", "DIC", "pD", "Dbar", "sd", "95% interval", "median"
        );
        for r in &self.rows {
            match &r.status {
                RowStatus::Ok { dic, deviance } => {
                    let interval = format!("({:.1}, {:.1})", deviance.q025, deviance.q975);
                    let _ = writeln!(
                        out,
                        "{:<8} {:>9.1} {:>8.2} {:>9.1} {:>8.3} {:>20} {:>9.1}",
                        r.label, dic.dic, dic.p_d, deviance.mean, deviance.sd, interval, deviance.median
                    );
                }
                RowStatus::Failed { message } => {
                    let _ = writeln!(out, "{:<8} failed: {message}", r.label);
                }
            }
        }
        out
    }

    /// CSV at full precision.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "model", "status", "dic", "p_d", "d_bar", "d_hat", "deviance_mean", "deviance_sd",
            "deviance_q025", "deviance_median", "deviance_q975", "message",
        ])?;
        for r in &self.rows {
            match &r.status {
                RowStatus::Ok { dic, deviance } => {
                    let nums = [
                        dic.dic, dic.p_d, dic.d_bar, dic.d_hat, deviance.mean, deviance.sd,
                        deviance.q025, deviance.median, deviance.q975,
                    ];
                    let mut rec = vec![r.label.clone(), "ok".into()];
                    rec.extend(nums.iter().map(|v| v.to_string()));
                    rec.push(String::new());
                    w.write_record(&rec)?;
                }
                RowStatus::Failed { message } => {
                    let mut rec = vec![r.label.clone(), "failed".into()];
                    rec.extend(std::iter::repeat_n(String::new(), 9));
                    rec.push(message.clone());
                    w.write_record(&rec)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
    }
}
