use thiserror::Error;

use crate::C64;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("material validation failed: {0}")]
    Validation(String),
    #[error("linear solver failure at s = {s}: {reason}")]
    Solver { s: C64, reason: String },
    #[error("CQ configuration error: {0}")]
    Configuration(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
