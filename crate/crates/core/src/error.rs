use thiserror::Error;

use crate::bloch::StateValidation;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension too small: need n >= {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("not a valid density matrix: {0}")]
    InvalidState(StateValidation),

    #[error("direction not normalized: |v| = {norm}")]
    UnnormalizedDirection { norm: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue {min_eigenvalue}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation}")]
    NotUnitary { deviation: f64 },

    #[error("invalid probability table: {0}")]
    InvalidProbabilities(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
