//! Monte Carlo experiments, verification suites and file formats built on
//! `gaplab-core`.

pub mod config;
pub mod error;
pub mod harness;
pub mod output;
pub mod verify;

pub use config::{ConfigFile, EngineConfig, Ensemble, ExperimentConfig, IntervalSpec};
pub use error::{LabError, LabResult};
pub use harness::{convergence_sweep, run_experiment, ExperimentResult};
