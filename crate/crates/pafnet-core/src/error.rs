//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by alignment, decomposition, modeling, training and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("K = {k} too large: at most {max} neighbors are available")]
    KTooLarge { k: usize, max: usize },

    #[error("neighbor plan shape mismatch: {reason}")]
    PlanShapeMismatch { reason: String },

    #[error("F = {f} frequency bands requested but only {t} coefficients exist")]
    FTooLarge { f: usize, t: usize },

    #[error("band ranges do not match the spectrum: {reason}")]
    RangeMismatch { reason: String },

    #[error("shape mismatch in {context}: expected {expected}, got {actual}")]
    ShapeMismatch {
        context: String,
        expected: String,
        actual: String,
    },

    #[error("segment too short: need at least {needed} timestamps, have {actual}")]
    TooShort { needed: usize, actual: usize },

    #[error("non-finite loss {loss} at epoch {epoch}, batch {batch}")]
    NonFiniteLoss {
        epoch: usize,
        batch: usize,
        loss: f64,
    },

    #[error("column {0:?} not found in CSV header")]
    MissingColumn(String),

    #[error("non-numeric cell at row {row}, column {col:?}")]
    NonNumericCell { row: usize, col: String },

    #[error("row count mismatch: manifest expects {expected}, file has {actual}")]
    RowCountMismatch { expected: usize, actual: usize },

    #[error("missing value at row {row}, column {col:?} with drop policy `error`")]
    UnhandledGap { row: usize, col: String },

    #[error("invalid series panel: {0}")]
    InvalidPanel(String),

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("checkpoint version mismatch: found {found:?}, expected {expected:?}")]
    VersionMismatch { found: String, expected: String },

    #[error("checkpoint is corrupt or truncated: {0}")]
    CorruptCheckpoint(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse failure class, used by callers that map errors to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad inputs: files, manifests, configs, shapes.
    Input,
    /// Bad persisted state: checkpoints.
    State,
    /// Numeric failure during training.
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonFiniteLoss { .. } => ErrorClass::Numeric,
            Error::VersionMismatch { .. } | Error::CorruptCheckpoint(_) => ErrorClass::State,
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
