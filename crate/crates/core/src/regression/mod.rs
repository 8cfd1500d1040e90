//! Regression structures for the mean, dispersion and mixture weight, and the
//! observation-level likelihood of the four model families.

mod dataset;
mod model;
mod spec;

pub use dataset::Dataset;
pub use model::{deviance, linear_predictors, log_likelihood, Model, ObsParams, ParameterLayout, ParameterVector};
pub use spec::{Family, ModelSpec, MuTMode, Term};

/// Lower clamp applied to the inverse-logit mean; mirrored at `1 − MU_CLAMP`.
pub const MU_CLAMP: f64 = 1e-6;
