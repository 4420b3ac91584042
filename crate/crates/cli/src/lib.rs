//! Experiment harness: configuration, seeded sweeps and CSV reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;
pub mod stats;
pub mod theory_args;

pub use config::{Experiment, ExperimentConfig};
pub use error::{CliError, CliResult};
pub use experiment::{audit, run_sweep, write_aggregates, write_records, write_steps, Mode, RunRecord, Sweep};
