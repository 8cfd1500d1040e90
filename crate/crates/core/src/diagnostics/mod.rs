//! Convergence diagnostics and residuals computed from retained draws.

mod autocorr;
mod gelman_rubin;
mod geweke;
mod mc_error;
mod report;
mod residuals;
mod summary;

pub use autocorr::autocorrelation;
pub use gelman_rubin::{gelman_rubin_plot, gelman_rubin_r};
pub use geweke::{geweke_plot, geweke_z, spectral_density_at_zero};
pub use mc_error::{mc_error, McError};
pub use report::{DiagnosticsReport, ParameterDiagnostics};
pub use residuals::{pearson_residuals, Residual};
pub use summary::{mean, quantile, std_dev, Summary};
