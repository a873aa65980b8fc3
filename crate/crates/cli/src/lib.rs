//! Experiment runner for the MDDM detectors and the baselines: configuration,
//! seeded multi-run execution, (stream x detector) matrices, CSV reports and
//! stream dumps.

pub mod config;
pub mod detectors;
pub mod error;
pub mod report;
pub mod runner;

pub use config::{Cell, ExperimentConfig, Settings, StreamSource};
pub use detectors::{DetectorConfig, DetectorKind};
pub use error::{CliError, Result};
pub use runner::{dump_stream, run_experiment, run_matrix, run_once, CellOutcome, ExperimentResult, RunRow};
