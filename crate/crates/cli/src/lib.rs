//! Command-line harness for the adversarial learning simulator: config
//! loading, single and batched runs, summaries and plot-ready CSV.

pub mod config;
pub mod error;
pub mod runner;
pub mod summary;
pub mod table;

pub use config::{ExperimentConfig, SigmaSpec};
pub use error::{CliError, CliResult};
pub use runner::{run_batch, run_single, ResultDocument};
pub use summary::BatchSummary;
