use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation contains a cycle")]
    CycleDetected,
    #[error("size {n} exceeds the cap of {cap}")]
    SizeExceeded { n: usize, cap: usize },
    #[error("division is not exact")]
    InexactDivision,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("poset is not a forest")]
    NotAForest,
    #[error("coupling index {index} is out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("normalising constant vanishes at step {step}")]
    ZeroModel { step: usize },
    #[error("growth specification violates its constraints: {0}")]
    SpecViolation(String),
    #[error("vector is not homogeneous")]
    NonHomogeneous,
    #[error("model needs an initial condition at degree {0}")]
    MissingInitialCondition(usize),
    #[error("probability normalisation needs rational couplings")]
    SymbolicNormalization,
    #[error("parse error: {0}")]
    Parse(String),
}
