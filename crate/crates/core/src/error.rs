use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square")]
    NonSquare,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("equality system is inconsistent")]
    InconsistentEqualities,
    #[error("invalid annulus bounds: require 1 <= a <= b, got a={a}, b={b}")]
    InvalidBounds { a: i64, b: i64 },
    #[error("matrix too large for the minor oracle (max {max})")]
    SizeTooLarge { max: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
