use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group order must be odd and at least 3, got {0}")]
    InvalidOrder(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("context mismatch: order {left} vs {right}")]
    ContextMismatch { left: u64, right: u64 },
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("principal character not allowed here")]
    PrincipalCharacter,
    #[error("conductor mismatch: expected {expected}, got {got}")]
    ConductorMismatch { expected: u64, got: u64 },
    #[error("function vanishes at residue {0} outside 0")]
    VanishesOffZero(u64),
    #[error("point is not on its Clifford torus (deviation {0:.3e})")]
    OffTorus(f64),
    #[error("function is not in the expected subspace: {0}")]
    NotInSubspace(String),
    #[error("kernel dimension is not one: {0}")]
    DegenerateKernel(String),
    #[error("path tracking failed: {0}")]
    TrackingFailed(String),
    #[error("zero function")]
    ZeroFunction,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
