use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by estimation, testing, simulation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Every kernel weight underflowed at the requested covariate value.
    #[error("cannot evaluate kernel fit at x = {x}: all kernel weights are zero (bandwidth {bandwidth})")]
    Evaluation { x: f64, bandwidth: f64 },

    #[error("bandwidth selection failed: {0}")]
    Selection(String),

    /// An estimator failure inside a bootstrap replicate.
    #[error("bootstrap replicate {replicate}, {population} population: {source}")]
    Replicate {
        replicate: usize,
        population: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// A failure inside one Monte Carlo cell.
    #[error("monte carlo cell {cell}, replication {replication}: {source}")]
    Cell {
        cell: String,
        replication: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
