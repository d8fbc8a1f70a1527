use thiserror::Error;

/// Errors returned by the combinatorial and numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported genus {0}")]
    UnsupportedGenus(usize),
    #[error("genus mismatch: expected {expected}, found {found}")]
    GenusMismatch { expected: usize, found: usize },
    #[error("invalid characteristic: {0}")]
    InvalidCharacteristic(String),
    #[error("duplicate member {0} in characteristic set")]
    DuplicateMember(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("imaginary part is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("non-finite input")]
    NonFinite,
    #[error("tolerance must be positive, got {0:e}")]
    InvalidTolerance(f64),
    #[error("singular matrix")]
    Singular,
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("no solution found: {0}")]
    NotFound(String),
    #[error("unstable result: {0}")]
    Unstable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
