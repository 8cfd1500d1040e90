use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mcmc::PosteriorSample;

use super::{
    autocorrelation, gelman_rubin_r, geweke_z, mc_error, McError, Residual, Summary,
};

pub const GEWEKE_FIRST: f64 = 0.1;
pub const GEWEKE_LAST: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterDiagnostics {
    pub name: String,
    pub summary: Summary,
    pub mc_error: McError,
    /// One Z score per chain.
    pub geweke_z: Vec<f64>,
    /// `None` when fewer than two chains were run.
    pub r_hat: Option<f64>,
    /// Autocorrelation by lag, from the first chain.
    pub autocorrelation: BTreeMap<usize, f64>,
}

impl ParameterDiagnostics {
    fn compute(name: &str, chains: &[Vec<f64>], max_lag: usize) -> Result<Self> {
        let pooled: Vec<f64> = chains.iter().flatten().copied().collect();
        let lag = max_lag.min(chains[0].len().saturating_sub(1) / 2);
        Ok(Self {
            name: name.to_string(),
            summary: Summary::of(&pooled)?,
            mc_error: mc_error(&pooled)?,
            geweke_z: chains
                .iter()
                .map(|c| geweke_z(c, GEWEKE_FIRST, GEWEKE_LAST))
                .collect::<Result<_>>()?,
            r_hat: if chains.len() >= 2 {
                Some(gelman_rubin_r(chains)?)
            } else {
                None
            },
            autocorrelation: autocorrelation(&chains[0], lag)?.into_iter().enumerate().collect(),
        })
    }

    /// `|Z| < 1.96` in a majority of chains.
    pub fn geweke_passes(&self) -> bool {
        let ok = self.geweke_z.iter().filter(|z| z.abs() < 1.96).count();
        2 * ok > self.geweke_z.len()
    }
}

/// Per-parameter convergence diagnostics plus the deviance node and,
/// optionally, Pearson residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub chains: usize,
    pub retained_per_chain: usize,
    pub parameters: Vec<ParameterDiagnostics>,
    pub deviance: ParameterDiagnostics,
    pub acceptance: Vec<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_hat_note: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<Residual>,
}

impl DiagnosticsReport {
    pub fn from_posterior(posterior: &PosteriorSample, max_lag: usize) -> Result<Self> {
        let parameters = (0..posterior.n_params())
            .map(|p| ParameterDiagnostics::compute(&posterior.names[p], &posterior.param_chains(p), max_lag))
            .collect::<Result<Vec<_>>>()?;
        let deviance = ParameterDiagnostics::compute("deviance", &posterior.deviance_chains(), max_lag)?;
        let r_hat_note = (posterior.n_chains() < 2).then(|| {
            "Brooks-Gelman-Rubin R omitted: it compares chains and only one chain was run".to_string()
        });
        Ok(Self {
            chains: posterior.n_chains(),
            retained_per_chain: posterior.retained_per_chain(),
            parameters,
            deviance,
            acceptance: posterior
                .chains
                .iter()
                .map(|c| c.block_names.iter().cloned().zip(c.acceptance.iter().copied()).collect())
                .collect(),
            r_hat_note,
            residuals: Vec::new(),
        })
    }

    pub fn with_residuals(mut self, residuals: Vec<Residual>) -> Self {
        self.residuals = residuals;
        self
    }

    pub fn parameter(&self, name: &str) -> Option<&ParameterDiagnostics> {
        self.parameters.iter().find(|p| p.name == name)
    }

    pub fn max_r_hat(&self) -> Option<f64> {
        self.parameters.iter().filter_map(|p| p.r_hat).reduce(f64::max)
    }
}
