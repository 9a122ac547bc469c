use thiserror::Error;

/// Errors produced by the masking library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("non-physical Bloch vector (norm {0})")]
    NonPhysical(f64),

    #[error("not in masker range")]
    NotInMaskerRange,

    #[error("block {block} off its disk (residual {residual:e})")]
    BlockOffDisk { block: usize, residual: f64 },

    #[error("invalid F choice: assembled matrix is not positive semidefinite (min eigenvalue {0:e})")]
    InvalidOffDiagonal(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("post-selection empty")]
    PostSelectionEmpty,

    #[error("tamper detected: reconstruction of a non-physical state (norm {norm})")]
    TamperDetected { norm: f64 },

    #[error("duplicate or missing masker in share set: {0}")]
    MaskerSet(String),

    #[error("malformed share file: {0}")]
    ShareFormat(String),

    #[error("malformed image: {0}")]
    ImageFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
