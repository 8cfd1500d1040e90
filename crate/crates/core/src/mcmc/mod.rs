//! Adaptive random-walk Metropolis-within-Gibbs.
//!
//! Each sweep updates the parameter blocks in a fixed order (β, γ, δ, μ_t)
//! with Gaussian random-walk proposals. During burn-in the per-block scale is
//! tuned by Robbins-Monro on the log scale toward a target acceptance rate and
//! the proposal shape is re-estimated from the burn-in draws every
//! `adapt_window` iterations; both are frozen once burn-in ends.

mod config;
mod init;
mod posterior;
mod prior;
mod sampler;

pub use config::SamplerConfig;
pub use init::{initial_values, InitStrategy};
pub use posterior::{AdaptationRecord, ChainDraws, PosteriorSample};
pub use prior::{log_posterior, PriorSpec, RegressionPosterior};
pub use sampler::{run_chains, run_target_chains, Block, Evaluation, Target};
