use thiserror::Error;

/// Errors raised by the matrix, state and bound routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix shape: {0}")]
    InvalidShape(String),
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max |h - h^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (||U^dagger U - I||_F = {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix of size {n} exceeds the supported limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("Bloch vector norm {norm} lies outside the unit ball")]
    BlochOutOfBall { norm: f64 },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("exhaustive permutation search requested for N = {n}, limit is {limit}")]
    ExhaustiveTooLarge { n: usize, limit: usize },
    #[error("invalid pair set: {0}")]
    InvalidPairSet(String),
    #[error("{count} operators supplied, at most {limit} supported")]
    TooManyOperators { count: usize, limit: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid scenario field `{field}`: {reason}")]
    Scenario { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn scenario(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Scenario {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
