use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },

    #[error("truncation level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("level exceeded: need level {needed}, truncation is {available}")]
    LevelExceeded { needed: usize, available: usize },

    #[error("letter {letter} out of range 1..={dim}")]
    LetterOutOfRange { letter: usize, dim: usize },

    #[error("invalid mode subset: {0}")]
    InvalidModeSubset(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("level {level} is not a Lie element")]
    NotLieElement { level: usize },

    #[error("constant term must be 1")]
    ConstantTermNotOne,

    #[error("invalid witness: decomposition does not realize the tensor")]
    InvalidWitness,

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
