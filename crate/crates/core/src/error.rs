use thiserror::Error;

/// Errors raised by the phase-space, metric and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("covariance matrix is unphysical (smallest symplectic eigenvalue {0})")]
    Unphysical(f64),

    #[error("matrix is not symplectic (residual {0:e})")]
    NotSymplectic(f64),

    #[error("matrix is not a symplectic generator (residual {0:e})")]
    NotGenerator(f64),

    #[error("covariance matrix is singular (det = {0:e})")]
    Singular(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid mode selection: {0}")]
    InvalidModeSelection(String),

    #[error("ensemble size {n} cannot be split into halves of at least {min} copies")]
    InvalidEnsemble { n: usize, min: usize },

    #[error("scheme {0} has no meter dynamics")]
    NoMeters(&'static str),

    #[error("not supported: {0}")]
    Unsupported(String),

    #[error("numerical routine failed: {0}")]
    Numerical(String),

    #[error("malformed table: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, Error>;
