use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::regression::Model;

use super::init::{initial_values, InitStrategy};
use super::posterior::{AdaptationRecord, ChainDraws, PosteriorSample};
use super::prior::{PriorSpec, RegressionPosterior};
use super::SamplerConfig;

const INITIAL_SD: f64 = 0.1;
/// Seed offset separating initial-value jitter from the chain streams.
const INIT_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub log_posterior: f64,
    pub log_likelihood: f64,
}

impl Evaluation {
    pub fn rejected() -> Self {
        Self {
            log_posterior: f64::NEG_INFINITY,
            log_likelihood: f64::NEG_INFINITY,
        }
    }
}

/// A contiguous group of coordinates updated jointly.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: String,
    pub indices: Range<usize>,
    /// Proposals are reflected into `[lo, hi]`.
    pub bounds: Option<(f64, f64)>,
}

impl Block {
    pub fn new(name: impl Into<String>, indices: Range<usize>) -> Self {
        Self {
            name: name.into(),
            indices,
            bounds: None,
        }
    }

    pub fn bounded(mut self, lo: f64, hi: f64) -> Self {
        self.bounds = Some((lo, hi));
        self
    }

    fn dim(&self) -> usize {
        self.indices.len()
    }
}

/// Anything the sampler can run on.
pub trait Target: Sync {
    fn dim(&self) -> usize;
    fn blocks(&self) -> Vec<Block>;
    fn evaluate(&self, x: &[f64]) -> Evaluation;
}

/// Fold `v` back into `[lo, hi]` by repeated reflection at the edges.
fn reflect(v: f64, lo: f64, hi: f64) -> f64 {
    let w = hi - lo;
    let r = (v - lo).rem_euclid(2.0 * w);
    lo + if r > w { 2.0 * w - r } else { r }
}

/// Lower Cholesky factor of a row-major `d × d` matrix, or `None` if it is not
/// numerically positive definite.
fn cholesky(a: &[f64], d: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * d + k] * l[j * d + k]).sum();
            if i == j {
                let v = a[i * d + i] - s;
                if !(v > 0.0) {
                    return None;
                }
                l[i * d + i] = v.sqrt();
            } else {
                l[i * d + j] = (a[i * d + j] - s) / l[j * d + j];
            }
        }
    }
    Some(l)
}

/// Running mean and co-moment matrix.
#[derive(Debug, Clone)]
struct Welford {
    n: usize,
    mean: Vec<f64>,
    comoment: Vec<f64>,
}

impl Welford {
    fn new(d: usize) -> Self {
        Self {
            n: 0,
            mean: vec![0.0; d],
            comoment: vec![0.0; d * d],
        }
    }

    fn push(&mut self, x: &[f64]) {
        let d = self.mean.len();
        self.n += 1;
        let n = self.n as f64;
        let delta: Vec<f64> = x.iter().zip(&self.mean).map(|(v, m)| v - m).collect();
        for (m, dv) in self.mean.iter_mut().zip(&delta) {
            *m += dv / n;
        }
        for i in 0..d {
            for j in 0..d {
                self.comoment[i * d + j] += delta[i] * (x[j] - self.mean[j]);
            }
        }
    }

    fn covariance(&self) -> Vec<f64> {
        let denom = (self.n.max(2) - 1) as f64;
        self.comoment.iter().map(|c| c / denom).collect()
    }
}

#[derive(Debug, Clone)]
struct BlockState {
    block: Block,
    target: f64,
    log_scale: f64,
    shape: Vec<f64>,
    shape_learned: bool,
    history: Welford,
    accepted: usize,
    attempted: usize,
}

impl BlockState {
    fn new(block: Block, target: f64) -> Self {
        let d = block.dim();
        let mut shape = vec![0.0; d * d];
        (0..d).for_each(|i| shape[i * d + i] = 1.0);
        Self {
            target,
            log_scale: INITIAL_SD.ln(),
            shape,
            shape_learned: false,
            history: Welford::new(d),
            accepted: 0,
            attempted: 0,
            block,
        }
    }

    fn propose<R: Rng + ?Sized>(&self, x: &[f64], out: &mut [f64], rng: &mut R) {
        let d = self.block.dim();
        let start = self.block.indices.start;
        out.copy_from_slice(x);
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let scale = self.log_scale.exp();
        for i in 0..d {
            let step: f64 = (0..=i).map(|k| self.shape[i * d + k] * z[k]).sum();
            let mut v = x[start + i] + scale * step;
            if let Some((lo, hi)) = self.block.bounds {
                v = reflect(v, lo, hi);
            }
            out[start + i] = v;
        }
    }

    /// For bounded blocks, a step larger than the interval width only
    /// wraps around, so the scale is capped there.
    fn clamp_scale(&mut self) {
        if let Some((lo, hi)) = self.block.bounds {
            let d = self.block.dim();
            let widest = (0..d).map(|i| self.shape[i * d + i]).fold(0.0, f64::max);
            self.log_scale = self.log_scale.min(((hi - lo) / widest).ln());
        }
    }

    /// Re-estimate the proposal shape from the burn-in history.
    fn refresh_shape(&mut self) {
        let d = self.block.dim();
        if self.history.n < (5 * d).max(20) {
            return;
        }
        let mut cov = self.history.covariance();
        let ridge = 1e-10 * (0..d).map(|i| cov[i * d + i]).fold(0.0, f64::max).max(1e-300);
        (0..d).for_each(|i| cov[i * d + i] += ridge);
        if let Some(l) = cholesky(&cov, d) {
            self.shape = l;
            if !self.shape_learned {
                self.shape_learned = true;
                self.log_scale = (2.38 / (d as f64).sqrt()).ln();
            }
            self.clamp_scale();
        }
    }
}

fn run_single_chain<T: Target + ?Sized>(
    target: &T,
    init: &[f64],
    config: &SamplerConfig,
    chain: usize,
) -> Result<ChainDraws> {
    if init.len() != target.dim() {
        return Err(Error::DimensionMismatch {
            what: "initial values",
            expected: target.dim(),
            got: init.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(chain as u64));
    let mut x = init.to_vec();
    let mut current = target.evaluate(&x);
    if !current.log_posterior.is_finite() {
        return Err(Error::Sampler(format!(
            "chain {chain}: log posterior at the initial values is not finite ({})",
            current.log_posterior
        )));
    }
    let mut states: Vec<BlockState> = target
        .blocks()
        .into_iter()
        .map(|b| {
            let t = config.target_for(b.dim());
            BlockState::new(b, t)
        })
        .collect();

    let retained = config.retained_per_chain();
    let mut draws = Vec::with_capacity(retained);
    let mut deviance = Vec::with_capacity(retained);
    let mut adaptation_log = Vec::new();
    let mut proposal = x.clone();
    let collect_from = config.burn_in / 5;

    for t in 0..config.iterations {
        let adapting = t < config.burn_in;
        for st in states.iter_mut() {
            st.propose(&x, &mut proposal, &mut rng);
            let cand = target.evaluate(&proposal);
            let log_alpha = cand.log_posterior - current.log_posterior;
            let accept_prob = if log_alpha.is_nan() { 0.0 } else { log_alpha.exp().min(1.0) };
            let accepted = accept_prob > 0.0 && rng.random::<f64>() < accept_prob;
            if accepted {
                x.copy_from_slice(&proposal);
                current = cand;
            }
            if adapting {
                let gain = ((t + 1) as f64).powf(-0.6);
                st.log_scale += gain * (accept_prob - st.target);
                st.clamp_scale();
                if t >= collect_from {
                    st.history.push(&x[st.block.indices.clone()]);
                }
            } else {
                st.attempted += 1;
                st.accepted += usize::from(accepted);
            }
        }
        if adapting && (t + 1) % config.adapt_window == 0 {
            for (b, st) in states.iter_mut().enumerate() {
                if t + 1 < config.burn_in {
                    st.refresh_shape();
                }
                adaptation_log.push(AdaptationRecord {
                    iteration: t,
                    block: b,
                    scale: st.log_scale.exp(),
                });
            }
        }
        if !adapting && (t - config.burn_in + 1).is_multiple_of(config.thin) {
            draws.push(x.clone());
            deviance.push(-2.0 * current.log_likelihood);
        }
    }

    let acceptance: Vec<f64> = states
        .iter()
        .map(|s| s.accepted as f64 / s.attempted.max(1) as f64)
        .collect();
    if let Some(st) = states.iter().zip(&acceptance).find(|(_, &a)| a == 0.0).map(|(s, _)| s) {
        return Err(Error::Sampler(format!(
            "chain {chain}: block `{}` accepted no proposals after burn-in",
            st.block.name
        )));
    }
    Ok(ChainDraws {
        chain,
        initial: init.to_vec(),
        draws,
        deviance,
        block_names: states.iter().map(|s| s.block.name.clone()).collect(),
        acceptance,
        scales: states.iter().map(|s| s.log_scale.exp()).collect(),
        adaptation_log,
    })
}

/// Run one chain per entry of `inits`, concurrently, returning them in order.
pub fn run_target_chains<T: Target + ?Sized>(
    target: &T,
    inits: &[Vec<f64>],
    config: &SamplerConfig,
) -> Result<Vec<ChainDraws>> {
    config.validate()?;
    if inits.len() != config.chains {
        return Err(Error::DimensionMismatch {
            what: "initial value sets",
            expected: config.chains,
            got: inits.len(),
        });
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = inits
            .iter()
            .enumerate()
            .map(|(c, init)| scope.spawn(move || run_single_chain(target, init, config, c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| Error::Sampler("chain thread panicked".into()))?)
            .collect()
    })
}

/// Fit a compiled model: jittered starting values per chain, chain `k` seeded
/// with `seed + k`.
pub fn run_chains(model: &Model, prior: &PriorSpec, config: &SamplerConfig) -> Result<PosteriorSample> {
    let target = RegressionPosterior::new(model.clone(), *prior)?;
    let inits: Vec<Vec<f64>> = (0..config.chains)
        .map(|c| {
            let seed = (config.seed ^ INIT_SEED_SALT).wrapping_add(c as u64);
            initial_values(model, InitStrategy::Jittered(seed)).stacked()
        })
        .collect();
    let chains = run_target_chains(&target, &inits, config)?;
    PosteriorSample::new(model.layout().names(), chains)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_stays_inside() {
        assert!((reflect(0.7, 1.0 / 3.0, 2.0 / 3.0) - (4.0 / 3.0 - 0.7)).abs() < 1e-15);
        assert!((reflect(0.3, 1.0 / 3.0, 2.0 / 3.0) - (2.0 / 3.0 - 0.3)).abs() < 1e-15);
        for v in [-5.0, -0.1, 0.2, 0.5, 0.9, 3.7, 100.3] {
            let r = reflect(v, 0.0, 1.0);
            assert!((0.0..=1.0).contains(&r), "{v} -> {r}");
        }
        assert_eq!(reflect(0.5, 0.0, 1.0), 0.5);
    }

    #[test]
    fn cholesky_roundtrip() {
        let a = [4.0, 2.0, 0.6, 2.0, 2.0, 0.5, 0.6, 0.5, 3.0];
        let l = cholesky(&a, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| l[i * 3 + k] * l[j * 3 + k]).sum();
                assert!((v - a[i * 3 + j]).abs() < 1e-12);
            }
        }
        assert!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_none());
    }

    #[test]
    fn welford_covariance() {
        let mut w = Welford::new(2);
        let pts = [[1.0, 2.0], [2.0, 1.0], [3.0, 5.0], [4.0, 3.0]];
        pts.iter().for_each(|p| w.push(p));
        let c = w.covariance();
        assert!((c[0] - 5.0 / 3.0).abs() < 1e-12);
        assert!((c[1] - 7.0 / 6.0).abs() < 1e-12);
        assert!((c[1] - c[2]).abs() < 1e-15);
        assert!((c[3] - 35.0 / 12.0).abs() < 1e-12);
    }

    struct Flat;

    impl Target for Flat {
        fn dim(&self) -> usize {
            1
        }
        fn blocks(&self) -> Vec<Block> {
            vec![Block::new("x", 0..1).bounded(0.0, 1.0)]
        }
        fn evaluate(&self, _x: &[f64]) -> Evaluation {
            Evaluation {
                log_posterior: 0.0,
                log_likelihood: 0.0,
            }
        }
    }

    struct Nowhere;

    impl Target for Nowhere {
        fn dim(&self) -> usize {
            1
        }
        fn blocks(&self) -> Vec<Block> {
            vec![Block::new("x", 0..1)]
        }
        fn evaluate(&self, x: &[f64]) -> Evaluation {
            if x[0] == 0.0 {
                Evaluation {
                    log_posterior: 0.0,
                    log_likelihood: 0.0,
                }
            } else {
                Evaluation::rejected()
            }
        }
    }

    fn small_config(chains: usize) -> SamplerConfig {
        SamplerConfig {
            iterations: 2000,
            burn_in: 500,
            thin: 3,
            chains,
            seed: 11,
            adapt_window: 100,
            target_acceptance: None,
        }
    }

    #[test]
    fn retained_count_and_adaptation_freeze() {
        let cfg = small_config(2);
        let chains = run_target_chains(&Flat, &[vec![0.5], vec![0.2]], &cfg).unwrap();
        for c in &chains {
            assert_eq!(c.len(), cfg.retained_per_chain());
            assert_eq!(c.len(), 500);
            assert!(c.draws.iter().all(|d| (0.0..=1.0).contains(&d[0])));
            assert!(c.adaptation_log.iter().all(|r| r.iteration < cfg.burn_in));
            assert_eq!(c.adaptation_log.last().unwrap().scale, c.scales[0]);
            // Every proposal is accepted on a flat bounded target; the scale
            // must still stay commensurate with the interval.
            assert!(c.scales[0] < 10.0, "{}", c.scales[0]);
        }
    }

    #[test]
    fn zero_acceptance_aborts() {
        let err = run_target_chains(&Nowhere, &[vec![0.0]], &small_config(1)).unwrap_err();
        assert!(matches!(err, Error::Sampler(_)), "{err}");
    }

    #[test]
    fn nonfinite_start_is_reported() {
        let err = run_target_chains(&Nowhere, &[vec![1.0]], &small_config(1)).unwrap_err();
        assert!(err.to_string().contains("initial"), "{err}");
    }

    #[test]
    fn init_count_must_match_chains() {
        assert!(run_target_chains(&Flat, &[vec![0.5]], &small_config(2)).is_err());
    }
}
