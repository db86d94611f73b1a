//! Experiment harness for the branch-and-cut engine: batch runs over
//! instance directories, aggregate metrics (shifted geometric means,
//! win/delta counts, Wilcoxon signed-rank), training-set curation, and a
//! random-search parameter tuner.

pub mod compare;
pub mod harness;
pub mod records;
pub mod stats;
pub mod tune;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: {msg}")]
    Csv { path: String, line: usize, msg: String },
    #[error("instance-seed pairs differ between the two runs: {0}")]
    MismatchedPairs(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error(transparent)]
    Engine(#[from] fathom_core::engine::EngineError),
    #[error(transparent)]
    Model(#[from] fathom_core::model::ModelError),
    #[error(transparent)]
    Config(#[from] fathom_core::cutsel::ConfigError),
}
