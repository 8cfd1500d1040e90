use serde::{Deserialize, Serialize};

use crate::distributions::{bb_ln_mass, compound_moments, tilted_ln_mass};
use crate::error::{Error, Result};
use crate::special::{ln_logistic, log_sum_exp, logistic, LogFactorialTable};

use super::{Dataset, Family, ModelSpec, MuTMode, Term, MU_CLAMP};

/// Regression coefficients for the `μ_b` (β), `φ` (γ) and `θ` (δ) structures,
/// plus `μ_t` when it is a free parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector {
    pub beta: Vec<f64>,
    #[serde(default)]
    pub gamma: Vec<f64>,
    #[serde(default)]
    pub delta: Vec<f64>,
    #[serde(default)]
    pub mu_t: Option<f64>,
}

impl ParameterVector {
    /// Concatenation `(β, γ, δ, μ_t)`.
    pub fn stacked(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.beta.len() + self.gamma.len() + self.delta.len() + 1);
        v.extend_from_slice(&self.beta);
        v.extend_from_slice(&self.gamma);
        v.extend_from_slice(&self.delta);
        v.extend(self.mu_t);
        v
    }
}

/// Sizes of the blocks inside a stacked parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterLayout {
    pub n_beta: usize,
    pub n_gamma: usize,
    pub n_delta: usize,
    pub has_mu_t: bool,
}

impl ParameterLayout {
    pub fn dim(&self) -> usize {
        self.n_beta + self.n_gamma + self.n_delta + usize::from(self.has_mu_t)
    }

    pub fn beta_range(&self) -> std::ops::Range<usize> {
        0..self.n_beta
    }

    pub fn gamma_range(&self) -> std::ops::Range<usize> {
        self.n_beta..self.n_beta + self.n_gamma
    }

    pub fn delta_range(&self) -> std::ops::Range<usize> {
        let s = self.n_beta + self.n_gamma;
        s..s + self.n_delta
    }

    pub fn mu_t_index(&self) -> Option<usize> {
        self.has_mu_t.then(|| self.n_beta + self.n_gamma + self.n_delta)
    }

    /// Column names: `beta1.., gamma1.., delta1.., mu_t`.
    pub fn names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.dim());
        names.extend((1..=self.n_beta).map(|i| format!("beta{i}")));
        names.extend((1..=self.n_gamma).map(|i| format!("gamma{i}")));
        names.extend((1..=self.n_delta).map(|i| format!("delta{i}")));
        if self.has_mu_t {
            names.push("mu_t".into());
        }
        names
    }

    pub fn unstack(&self, x: &[f64]) -> Result<ParameterVector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "stacked parameter vector",
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(ParameterVector {
            beta: x[self.beta_range()].to_vec(),
            gamma: x[self.gamma_range()].to_vec(),
            delta: x[self.delta_range()].to_vec(),
            mu_t: self.mu_t_index().map(|i| x[i]),
        })
    }

    fn check(&self, p: &ParameterVector) -> Result<()> {
        let pairs = [
            ("beta coefficients", self.n_beta, p.beta.len()),
            ("gamma coefficients", self.n_gamma, p.gamma.len()),
            ("delta coefficients", self.n_delta, p.delta.len()),
            ("mu_t", usize::from(self.has_mu_t), usize::from(p.mu_t.is_some())),
        ];
        for (what, expected, got) in pairs {
            if expected != got {
                return Err(Error::DimensionMismatch { what, expected, got });
            }
        }
        Ok(())
    }
}

/// Per-observation distribution parameters after applying the links.
///
/// Families without a dispersion report `phi = +inf`; families without a
/// mixture report `theta = 0` and `mu_t = 0.5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObsParams {
    pub mu_b: f64,
    pub phi: f64,
    pub theta: f64,
    pub mu_t: f64,
}

impl ObsParams {
    /// `(E(P), V(P))` of the success probability.
    pub fn probability_moments(&self) -> (f64, f64) {
        let th = self.theta;
        let mean = th * self.mu_t + (1.0 - th) * self.mu_b;
        let v_beta = if self.phi.is_infinite() {
            0.0
        } else {
            self.mu_b * (1.0 - self.mu_b) / (1.0 + self.phi)
        };
        let v_tilted = self.mu_t * (1.0 - self.mu_t) - 1.0 / 6.0;
        let gap = self.mu_t - self.mu_b;
        let var = if th == 0.0 {
            v_beta
        } else {
            th * v_tilted + (1.0 - th) * v_beta + th * (1.0 - th) * gap * gap
        };
        (mean, var)
    }

    /// Mean and variance of the count out of `m` trials.
    pub fn count_moments(&self, m: u32) -> (f64, f64) {
        let (mean, var) = self.probability_moments();
        compound_moments(m, mean, var)
    }
}

/// Row-major design matrix.
#[derive(Debug, Clone)]
struct Design {
    cols: usize,
    values: Vec<f64>,
}

impl Design {
    fn build(terms: &[Term], data: &Dataset) -> Result<Self> {
        let n = data.len();
        let mut values = vec![0.0; n * terms.len()];
        for (j, term) in terms.iter().enumerate() {
            match term {
                Term::Intercept => (0..n).for_each(|i| values[i * terms.len() + j] = 1.0),
                Term::Covariate { name, shift } => {
                    let col = data
                        .covariate(name)
                        .ok_or_else(|| Error::Spec(format!("covariate `{name}` is not in the dataset")))?;
                    for (i, v) in col.iter().enumerate() {
                        values[i * terms.len() + j] = v + shift;
                    }
                }
            }
        }
        Ok(Self {
            cols: terms.len(),
            values,
        })
    }

    #[inline]
    fn eta(&self, row: usize, coef: &[f64]) -> f64 {
        let r = &self.values[row * self.cols..(row + 1) * self.cols];
        r.iter().zip(coef).map(|(x, c)| x * c).sum()
    }
}

/// A [`ModelSpec`] compiled against a [`Dataset`]: design matrices and the
/// per-observation constants of the likelihood.
#[derive(Debug, Clone)]
pub struct Model {
    spec: ModelSpec,
    layout: ParameterLayout,
    fixed_mu_t: f64,
    y: Vec<u32>,
    m: Vec<u32>,
    x: Design,
    z: Design,
    w: Design,
    ln_choose: Vec<f64>,
    ln_beta_unit: Vec<f64>,
}

impl Model {
    pub fn new(spec: &ModelSpec, data: &Dataset) -> Result<Self> {
        spec.validate_against(data)?;
        let table = LogFactorialTable::new(data.max_trials() as usize + 1);
        let (ln_choose, ln_beta_unit) = data
            .y()
            .iter()
            .zip(data.m())
            .map(|(&y, &m)| {
                (
                    table.ln_choose(m, y),
                    table.get(y) + table.get(m - y) - table.get(m + 1),
                )
            })
            .unzip();
        let mode = spec.mu_t_mode();
        Ok(Self {
            layout: ParameterLayout {
                n_beta: spec.mu_b.len(),
                n_gamma: spec.phi.len(),
                n_delta: spec.theta.len(),
                has_mu_t: mode == Some(MuTMode::Free),
            },
            fixed_mu_t: match mode {
                Some(MuTMode::Fixed(v)) => v,
                _ => 0.5,
            },
            spec: spec.clone(),
            y: data.y().to_vec(),
            m: data.m().to_vec(),
            x: Design::build(&spec.mu_b, data)?,
            z: Design::build(&spec.phi, data)?,
            w: Design::build(&spec.theta, data)?,
            ln_choose,
            ln_beta_unit,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn layout(&self) -> ParameterLayout {
        self.layout
    }

    pub fn n_obs(&self) -> usize {
        self.y.len()
    }

    pub fn y(&self) -> &[u32] {
        &self.y
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    /// Per-observation parameters; `x` is a stacked parameter vector of the
    /// right length.
    #[inline]
    fn obs_params_stacked(&self, i: usize, x: &[f64]) -> ObsParams {
        let l = &self.layout;
        let mu = logistic(self.x.eta(i, &x[l.beta_range()])).clamp(MU_CLAMP, 1.0 - MU_CLAMP);
        let fam = self.spec.family;
        let phi = if fam.has_dispersion() {
            self.z.eta(i, &x[l.gamma_range()]).exp()
        } else {
            f64::INFINITY
        };
        let (theta, mu_t) = if fam.has_mixture() {
            (
                logistic(self.w.eta(i, &x[l.delta_range()])),
                l.mu_t_index().map_or(self.fixed_mu_t, |k| x[k]),
            )
        } else {
            (0.0, 0.5)
        };
        ObsParams {
            mu_b: mu,
            phi,
            theta,
            mu_t,
        }
    }

    pub fn linear_predictors(&self, params: &ParameterVector) -> Result<Vec<ObsParams>> {
        self.layout.check(params)?;
        let x = params.stacked();
        Ok((0..self.n_obs()).map(|i| self.obs_params_stacked(i, &x)).collect())
    }

    pub fn linear_predictors_stacked(&self, x: &[f64]) -> Result<Vec<ObsParams>> {
        self.check_stacked(x)?;
        Ok((0..self.n_obs()).map(|i| self.obs_params_stacked(i, x)).collect())
    }

    fn check_stacked(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.layout.dim() {
            return Err(Error::DimensionMismatch {
                what: "stacked parameter vector",
                expected: self.layout.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Log-likelihood contribution of observation `i`.
    #[inline]
    fn obs_log_lik(&self, i: usize, x: &[f64]) -> f64 {
        let l = &self.layout;
        let (y, m) = (self.y[i], self.m[i]);
        let mu = logistic(self.x.eta(i, &x[l.beta_range()])).clamp(MU_CLAMP, 1.0 - MU_CLAMP);
        let fam = self.spec.family;
        if !fam.has_dispersion() {
            return bb_ln_mass(y, m, mu, f64::INFINITY, self.ln_choose[i]);
        }
        let phi = self.z.eta(i, &x[l.gamma_range()]).exp();
        if !(phi > 0.0) {
            return f64::NEG_INFINITY;
        }
        let bb = bb_ln_mass(y, m, mu, phi, self.ln_choose[i]);
        if !fam.has_mixture() {
            return bb;
        }
        let eta_w = self.w.eta(i, &x[l.delta_range()]);
        let mu_t = l.mu_t_index().map_or(self.fixed_mu_t, |k| x[k]);
        let tilted = tilted_ln_mass(y, m, mu_t, self.ln_choose[i], self.ln_beta_unit[i]);
        log_sum_exp(ln_logistic(eta_w) + tilted, ln_logistic(-eta_w) + bb)
    }

    /// Log-likelihood at a stacked parameter vector, skipping dimension checks.
    ///
    /// Returns `-inf` if any term is not finite (degenerate mean or
    /// dispersion, or `μ_t` outside its range).
    pub fn log_likelihood_stacked(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.layout.dim());
        if let Some(k) = self.layout.mu_t_index() {
            if !(x[k] > 1.0 / 3.0 && x[k] < 2.0 / 3.0) {
                return f64::NEG_INFINITY;
            }
        }
        let mut total = 0.0;
        for i in 0..self.n_obs() {
            let t = self.obs_log_lik(i, x);
            if !t.is_finite() {
                return f64::NEG_INFINITY;
            }
            total += t;
        }
        total
    }

    pub fn log_likelihood(&self, params: &ParameterVector) -> Result<f64> {
        self.layout.check(params)?;
        Ok(self.log_likelihood_stacked(&params.stacked()))
    }

    /// Per-observation log-likelihood terms.
    pub fn log_likelihood_terms(&self, params: &ParameterVector) -> Result<Vec<f64>> {
        self.layout.check(params)?;
        let x = params.stacked();
        Ok((0..self.n_obs()).map(|i| self.obs_log_lik(i, &x)).collect())
    }

    /// `−2 · log_likelihood`; `+inf` when the likelihood is degenerate.
    pub fn deviance(&self, params: &ParameterVector) -> Result<f64> {
        Ok(-2.0 * self.log_likelihood(params)?)
    }

    pub fn deviance_stacked(&self, x: &[f64]) -> Result<f64> {
        self.check_stacked(x)?;
        Ok(-2.0 * self.log_likelihood_stacked(x))
    }
}

pub fn linear_predictors(spec: &ModelSpec, data: &Dataset, params: &ParameterVector) -> Result<Vec<ObsParams>> {
    Model::new(spec, data)?.linear_predictors(params)
}

pub fn log_likelihood(spec: &ModelSpec, data: &Dataset, params: &ParameterVector) -> Result<f64> {
    Model::new(spec, data)?.log_likelihood(params)
}

pub fn deviance(spec: &ModelSpec, data: &Dataset, params: &ParameterVector) -> Result<f64> {
    Model::new(spec, data)?.deviance(params)
}
