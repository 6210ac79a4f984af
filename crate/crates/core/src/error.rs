use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid flag type: {0}")]
    InvalidFlagType(String),

    #[error("m = 0 is the complex flag manifold CG(nu) itself; P(m, nu) requires m >= 1")]
    DegenerateSphere,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("non-exact polynomial division (remainder {0})")]
    InexactDivision(String),

    #[error("closed form disagrees with enumeration: {0}")]
    Inconsistency(String),

    #[error("chain complex is malformed: {0}")]
    MalformedComplex(String),

    #[error("class has non-zero component in degree {degree} above the top degree {top}")]
    TruncationOverflow { degree: usize, top: usize },

    #[error("odd factor parity violation: {0}")]
    ParityViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
