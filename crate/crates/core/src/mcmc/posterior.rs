use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A proposal scale recorded when the sampler changed it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationRecord {
    pub iteration: usize,
    pub block: usize,
    pub scale: f64,
}

/// Retained draws of one chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDraws {
    pub chain: usize,
    pub initial: Vec<f64>,
    /// One row per retained draw over the stacked parameter vector.
    pub draws: Vec<Vec<f64>>,
    /// `−2 · log-likelihood` at each retained draw.
    pub deviance: Vec<f64>,
    pub block_names: Vec<String>,
    /// Post burn-in acceptance rate per block.
    pub acceptance: Vec<f64>,
    /// Final (frozen) proposal scale per block.
    pub scales: Vec<f64>,
    /// Scale changes made during burn-in, sampled at each adaptation window.
    pub adaptation_log: Vec<AdaptationRecord>,
}

impl ChainDraws {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn column(&self, param: usize) -> Vec<f64> {
        self.draws.iter().map(|d| d[param]).collect()
    }
}

/// Retained draws from every chain, in chain order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSample {
    pub names: Vec<String>,
    pub chains: Vec<ChainDraws>,
}

impl PosteriorSample {
    pub fn new(names: Vec<String>, chains: Vec<ChainDraws>) -> Result<Self> {
        if chains.is_empty() {
            return Err(Error::Sampler("posterior sample has no chains".into()));
        }
        let len = chains[0].len();
        for c in &chains {
            if c.len() != len || c.deviance.len() != len {
                return Err(Error::Sampler("chains have unequal lengths".into()));
            }
            if c.draws.iter().any(|d| d.len() != names.len()) {
                return Err(Error::DimensionMismatch {
                    what: "draw width",
                    expected: names.len(),
                    got: c.draws.iter().map(Vec::len).find(|&w| w != names.len()).unwrap_or(0),
                });
            }
        }
        Ok(Self { names, chains })
    }

    pub fn n_chains(&self) -> usize {
        self.chains.len()
    }

    pub fn n_params(&self) -> usize {
        self.names.len()
    }

    pub fn retained_per_chain(&self) -> usize {
        self.chains.first().map_or(0, ChainDraws::len)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Per-chain traces of one parameter.
    pub fn param_chains(&self, param: usize) -> Vec<Vec<f64>> {
        self.chains.iter().map(|c| c.column(param)).collect()
    }

    pub fn param_pooled(&self, param: usize) -> Vec<f64> {
        self.chains.iter().flat_map(|c| c.draws.iter().map(move |d| d[param])).collect()
    }

    pub fn deviance_chains(&self) -> Vec<Vec<f64>> {
        self.chains.iter().map(|c| c.deviance.clone()).collect()
    }

    pub fn deviance_pooled(&self) -> Vec<f64> {
        self.chains.iter().flat_map(|c| c.deviance.iter().copied()).collect()
    }

    /// All retained draws across chains.
    pub fn draws(&self) -> impl Iterator<Item = &[f64]> {
        self.chains.iter().flat_map(|c| c.draws.iter().map(Vec::as_slice))
    }

    /// Coordinatewise posterior mean of the stacked parameter vector.
    pub fn posterior_mean(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.n_params()];
        let mut n = 0usize;
        for d in self.draws() {
            for (s, v) in sum.iter_mut().zip(d) {
                *s += v;
            }
            n += 1;
        }
        sum.iter().map(|s| s / n as f64).collect()
    }

    /// Keep every `k`-th retained draw of each chain.
    pub fn thinned(&self, k: usize) -> Self {
        let k = k.max(1);
        let pick = |c: &ChainDraws| ChainDraws {
            draws: c.draws.iter().skip(k - 1).step_by(k).cloned().collect(),
            deviance: c.deviance.iter().skip(k - 1).step_by(k).copied().collect(),
            ..c.clone()
        };
        Self {
            names: self.names.clone(),
            chains: self.chains.iter().map(pick).collect(),
        }
    }
}
