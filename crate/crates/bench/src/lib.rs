//! Benchmark harness for the Boruvka MST algorithms.
//!
//! A [`BenchPlan`] names a graph (a built-in preset, generator parameters or a
//! file), the algorithms and worker counts to run, and how many timed trials
//! to take. [`run_bench`] produces one [`BenchRow`] per trial, which
//! serialize to CSV, and [`summarize_speedups`] reduces rows to median-based
//! speedup tables.

pub mod plan;
pub mod preset;
pub mod report;
pub mod run;
pub mod summary;

use thiserror::Error;

pub use plan::{Algorithm, BenchPlan, GraphSource};
pub use preset::{preset, Preset, PRESETS};
pub use report::{read_rows, write_rows, BenchRow};
pub use run::{run_algorithm, run_bench, run_bench_on};
pub use summary::{median, summarize_speedups, Headline, SpeedupRow, Summary};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Graph(#[from] boruvka::GraphError),
    #[error(transparent)]
    Mst(#[from] boruvka::MstError),
    #[error(transparent)]
    Verify(#[from] boruvka::VerifyError),
    #[error("verification failed for {algorithm} with {threads} threads, trial {trial}: {report}")]
    VerificationFailed {
        algorithm: Algorithm,
        threads: usize,
        trial: usize,
        report: String,
    },
    #[error(
        "{algorithm} with {threads} threads produced weight {got}, earlier rows have {expected}"
    )]
    WeightMismatch {
        algorithm: Algorithm,
        threads: usize,
        got: u128,
        expected: u128,
    },
    #[error("graph {graph} has parallel rows but no sequential baseline")]
    MissingBaseline { graph: String },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl BenchError {
    /// Process exit code for the CLI: 2 for unusable graphs, 3 when a run
    /// did not yield a verified tree, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Graph(_) | BenchError::UnknownPreset(_) => 2,
            BenchError::VerificationFailed { .. }
            | BenchError::WeightMismatch { .. }
            | BenchError::Mst(_)
            | BenchError::Verify(_) => 3,
            _ => 1,
        }
    }
}
