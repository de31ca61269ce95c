use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by grid construction, operators, solvers and the study harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("empty input")]
    EmptyInput,

    #[error(
        "load point x = {x} is too close to the boundary for a 4-point stencil (h = {h}, l = {l})"
    )]
    LoadTooCloseToBoundary { x: f64, h: f64, l: f64 },

    #[error("insufficient history: need {needed} levels, have {available}")]
    InsufficientHistory { needed: usize, available: usize },

    #[error("zero pivot in tridiagonal elimination at row {row}")]
    ZeroPivot { row: usize },

    #[error("singular capacitance matrix for load configuration {loads}")]
    SingularCapacitance { loads: String },

    #[error("singular dense system")]
    SingularDense,

    #[error("observer aborted at level {level}: {message}")]
    Observer { level: usize, message: String },

    #[error("problem `{0}` has no exact solution; convergence studies need one")]
    MissingExactSolution(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}
