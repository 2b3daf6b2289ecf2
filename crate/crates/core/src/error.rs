use thiserror::Error;

use crate::spectral::Spectrum;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node set is empty")]
    Empty,
    #[error("nodes must be strictly increasing: x[{index}] >= x[{}]", index + 1)]
    NonMonotonic { index: usize },
    #[error("node x[{index}] = {value} lies outside the open interval (0, 1)")]
    OutOfRange { index: usize, value: f64 },
    #[error("basis degree {degree} exceeds the number of nodes minus one ({max})")]
    DegreeExceedsRows { degree: usize, max: usize },
    #[error(
        "entry ({row}, {col}) of the bidiagonal decomposition is not a positive normal double"
    )]
    UnderflowDetected { row: usize, col: usize },
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("least squares needs more rows than columns, got {rows}x{cols}")]
    NotOverdetermined { rows: usize, cols: usize },
    #[error("no stabilization up to {bits} bits of working precision")]
    PrecisionExhausted {
        bits: u32,
        partial: Option<Box<Spectrum>>,
    },
    #[error("iteration did not converge within {iterations} sweeps")]
    NoConvergence { iterations: usize },
    #[error("zero pivot at ({row}, {col}) during Neville elimination")]
    ZeroPivot { row: usize, col: usize },
    #[error("length mismatch: reference has {reference} values, computed has {computed}")]
    LengthMismatch { reference: usize, computed: usize },
    #[error("invalid precision policy: {0}")]
    InvalidPolicy(String),
}
