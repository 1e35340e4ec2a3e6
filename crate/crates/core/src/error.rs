use thiserror::Error;

/// Errors produced by operator algebra, state construction and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subsystem index {index} out of range 1..={n}")]
    SubsystemOutOfRange { index: usize, n: usize },

    #[error("duplicate subsystem index {0}")]
    DuplicateSubsystem(usize),

    #[error("operator is not Hermitian (max |A - A^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("not a projector: {0}")]
    NotProjector(String),

    #[error("invalid fidelities: {0}")]
    InvalidFidelities(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("supported scale exceeded: {0}")]
    ScaleExceeded(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
