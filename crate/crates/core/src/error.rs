use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("row {row} of the constraint matrix is zero (squared norm {norm_sq:e})")]
    ZeroRow { row: usize, norm_sq: f64 },

    #[error("non-finite entry in {what} at position {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("C({m}, {beta}) subsets exceeds the enumeration limit {limit}")]
    TooManySubsets { m: usize, beta: usize, limit: u64 },

    #[error(
        "iterate became non-finite at iteration {iteration} \
         (last finite residual norm {last_residual:e})"
    )]
    Diverged { iteration: usize, last_residual: f64 },

    #[error(
        "eigenvalue iteration did not converge after {iterations} iterations \
         (relative residual {residual:e})"
    )]
    EigenNoConvergence { iterations: usize, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("missing series: {0}")]
    MissingSeries(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
