//! Seeded experiments over the built-in benchmarks, their CSV/JSON reports,
//! and the `acqlab` command line.

pub mod cli;
pub mod experiment;
pub mod names;
pub mod output;
pub mod verify;

pub use experiment::{run_experiment, run_seeds, ExperimentPlan, Report, RunResult, Settings, Source, Summary};

use acqlab_core::acquisition::AcquisitionError;
use acqlab_core::benchmarks::BenchmarkError;
use acqlab_core::model::ModelError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
    #[error("invalid instance: {0}")]
    Model(#[from] ModelError),
    #[error("instance has no target network")]
    NoTarget,
    #[error(transparent)]
    Acquisition(#[from] AcquisitionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Every error is a problem with the request or its inputs.
    pub fn exit_code(&self) -> i32 {
        cli::EXIT_CONFIG
    }
}
