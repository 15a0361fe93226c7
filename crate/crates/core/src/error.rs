use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("unknown Coxeter type {0:?}")]
    UnknownType(String),

    #[error("generator {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: i64, rank: usize },

    #[error("invalid word {0:?}")]
    InvalidWord(String),

    #[error("no longest element: {0} is infinite")]
    NoLongestElement(String),

    #[error("infinite truncation requested for {0}")]
    InfiniteTruncation(String),

    #[error("self-duality violated: {0}")]
    SelfDualityViolated(String),

    #[error("internal consistency error: {0}")]
    Inconsistent(String),

    #[error("matrix is not unit triangular: {0}")]
    NotUnitTriangular(String),

    #[error("malformed table: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
