use thiserror::Error;

/// Errors raised when constructing or operating on fields.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("grid size {0} is invalid: must be even and at least 16")]
    InvalidGrid(usize),

    #[error("expected {expected} samples, got {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("field mean {mean:e} is not zero (max-abs {max_abs:e})")]
    NonZeroMean { mean: f64, max_abs: f64 },

    #[error("coefficients violate Hermitian symmetry (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("fields live on different grids ({0} vs {1})")]
    GridMismatch(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = FieldError> = std::result::Result<T, E>;
