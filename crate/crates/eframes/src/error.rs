//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<V> = std::result::Result<V, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shape mismatch: sequence length {len} must equal dimension {dim}")]
    ShapeMismatch { len: usize, dim: usize },

    #[error("matrix is numerically singular (sigma_min <= rank_tol * sigma_max)")]
    SingularMatrix,

    #[error("polar decomposition requires an invertible input")]
    SingularInput,

    #[error("matrix is not Hermitian within tolerance (residual {residual})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue})")]
    NotPSD { min_eigenvalue: f64 },

    #[error(
        "sequence is not a frame (lambda_min {lambda_min} <= rank_tol * lambda_max {lambda_max})"
    )]
    NotAFrame { lambda_min: f64, lambda_max: f64 },

    #[error("diagonal entry {index} has modulus {modulus} below the rank tolerance")]
    ZeroDiagonal { index: usize, modulus: f64 },

    #[error("vectors are numerically dependent: Gram matrix is singular")]
    NotRieszBasis,

    #[error("sequence is not orthonormal within tolerance (residual {residual})")]
    NotOrthonormal { residual: f64 },

    #[error("epsilon must lie strictly inside (0, 1), got {value}")]
    BadEpsilon { value: f64 },

    #[error("bad generator spec: {0}")]
    BadSpec(String),

    #[error("degenerate random draw persisted after {attempts} attempts")]
    DegenerateDraw { attempts: usize },

    #[error("eigensolver failed to converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("config parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid config field `{field}`: {message}")]
    ValidationError { field: String, message: String },
}
