use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("frame has {0} points; at most {max} are supported", max = crate::bits::MAX_POINTS)]
    TooManyPoints(usize),
    #[error("frame must have at least one point")]
    EmptyFrame,
    #[error("point index {index} out of range for a frame with {n} points")]
    PointOutOfRange { index: usize, n: usize },
    #[error("relation is not a quasiorder (reflexive and transitive)")]
    NotQuasiorder,
    #[error("frame is not a fork frame: {0}")]
    NotForkFrame(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("element is not closed")]
    NotClosed,
    #[error("relative algebra bound must be non-zero")]
    ZeroBound,
    #[error("operation requires a non-trivial algebra")]
    TrivialAlgebra,
    #[error("algebra is not a fork algebra")]
    NotForkAlgebra,
    #[error("algebra is not directly indecomposable")]
    NotIndecomposable,
    #[error("algebra is outside the variety: {0}")]
    WrongVariety(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("search budget of {0} steps exceeded")]
    SearchBudgetExceeded(u64),
    #[error("generated subframe is not projective: {0}")]
    NotProjectiveSubalgebra(String),
    #[error("embedding is not onto a generated subframe: {0}")]
    NotGenerated(String),
    #[error("construction invariant violated: {0}")]
    ProofGap(String),
    #[error("algebra is not unifiable")]
    NotUnifiable,
    #[error("generality check inconsistent: {0}")]
    Inconsistent(String),
    #[error("{n} points exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
