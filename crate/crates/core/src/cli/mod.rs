//! Command implementations behind the `tbbreg` binary: dataset ingestion, run
//! configuration, and the `fit`, `compare`, `simulate`, `diagnose` and `check`
//! commands. All persisted numbers are written at full precision.

mod config;
mod data;
mod fit;
mod simulate;

pub use config::{CovariateGenerator, ModelEntry, RunConfig, SimulateConfig};
pub use data::{load_dataset, parse_dataset, write_dataset};
pub use fit::{
    analyse, chain_csv, cmd_compare, cmd_diagnose, cmd_fit, fit_model, parse_chain_csv, write_fit_outputs,
    FitManifest, FitReport, ParameterRow, MANIFEST_FILE, PLOT_BINS, REPORT_MAX_LAG,
};
pub use simulate::{cmd_simulate, simulate};

use crate::check::{run_checks, CheckReport};

/// `check`: run the closed-form self-verification suite.
pub fn cmd_check() -> CheckReport {
    run_checks()
}
