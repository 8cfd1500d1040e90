use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mcmc::{PriorSpec, SamplerConfig};
use crate::regression::{Dataset, Family, ModelSpec, ParameterVector};

/// One model of a run: a specification plus an optional display label
/// (defaults to the family's short label).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub spec: ModelSpec,
}

impl ModelEntry {
    pub fn new(spec: ModelSpec) -> Self {
        Self { label: None, spec }
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.spec.family.label().to_string())
    }
}

/// Settings of a `fit` or `compare` run, read from TOML:
///
/// ```toml
/// data = "seeds.csv"
/// out = "results"
///
/// [sampler]
/// iterations = 100000
/// burn_in = 10000
/// thin = 10
/// chains = 3
/// seed = 1
///
/// [prior]
/// beta_precision = 0.1
///
/// [[model]]
/// family = "tilted-beta-binomial"
/// mu_b = ["1", "x1+1", "x2+1"]
/// phi = ["1", "x2+1"]
/// theta = ["1"]
/// mu_t = "free"
/// ```
///
/// Relative paths are resolved against the directory of the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub data: PathBuf,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub sampler: SamplerConfig,
    #[serde(default)]
    pub prior: PriorSpec,
    #[serde(default, rename = "model")]
    pub models: Vec<ModelEntry>,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn resolve(base: Option<&Path>, p: &Path) -> PathBuf {
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

impl RunConfig {
    pub fn new(data: impl Into<PathBuf>, out: impl Into<PathBuf>, models: Vec<ModelEntry>) -> Self {
        Self {
            data: data.into(),
            out: out.into(),
            sampler: SamplerConfig::default(),
            prior: PriorSpec::default(),
            models,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)?;
        let base = path.parent();
        cfg.data = resolve(base, &cfg.data);
        cfg.out = resolve(base, &cfg.out);
        Ok(cfg)
    }

    /// Checks sampler and prior settings and that every referenced covariate
    /// exists in `data`.
    pub fn validate(&self, data: &Dataset) -> Result<()> {
        self.sampler.validate()?;
        self.prior.validate()?;
        if self.models.is_empty() {
            return Err(Error::Config("no [[model]] entries".into()));
        }
        for m in &self.models {
            m.spec.validate_against(data)?;
        }
        Ok(())
    }

    /// The models whose family matches `family`, or all of them.
    pub fn select(&self, family: Option<Family>) -> Result<Vec<&ModelEntry>> {
        let chosen: Vec<_> = self
            .models
            .iter()
            .filter(|m| family.is_none_or(|f| m.spec.family == f))
            .collect();
        if chosen.is_empty() {
            return Err(Error::Config(match family {
                Some(f) => format!("no model with family {f} in the configuration"),
                None => "no [[model]] entries".into(),
            }));
        }
        Ok(chosen)
    }
}

/// How a generated covariate column is filled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovariateGenerator {
    pub name: String,
    /// Cycle through these values row by row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<f64>>,
    /// Draw uniformly from `[lo, hi)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<[f64; 2]>,
}

/// Settings of a `simulate` run, read from TOML:
///
/// ```toml
/// rows = 40
/// trials = 20
/// seed = 7
///
/// [[covariate]]
/// name = "x1"
/// levels = [0, 1]
///
/// [model]
/// family = "tilted-beta-binomial"
/// mu_b = ["1", "x1"]
/// phi = ["1"]
/// theta = ["1"]
///
/// [params]
/// beta = [-0.5, 1.0]
/// gamma = [1.5]
/// delta = [-1.0]
/// mu_t = 0.45
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub rows: usize,
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, rename = "covariate")]
    pub covariates: Vec<CovariateGenerator>,
    pub model: ModelSpec,
    pub params: ParameterVector,
}

impl SimulateConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }
}
