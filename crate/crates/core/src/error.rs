use thiserror::Error;

use crate::numeric::ParseRationalError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} is not a live supervertex")]
    DeadSupervertex(usize),
    #[error("cut side must be a nonempty proper subset")]
    TrivialCut,
    #[error("cut splits supervertex {0}")]
    SplitsSupervertex(usize),
    #[error("graph needs at least two vertices")]
    TooFewVertices,
    #[error("negative edge cost {detail}")]
    NegativeCost { detail: String },
    #[error("lower envelope of an empty line set")]
    EmptyLineSet,
    #[error("degenerate domain [{lo}, {hi}]")]
    InvalidDomain { lo: String, hi: String },
    #[error("instance too large: n = {n} exceeds cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("start data inconsistent: L(0) = {given} but Z(0) = {actual}")]
    InconsistentStart { given: String, actual: String },
    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn negative(detail: impl Into<String>) -> Self {
        Error::NegativeCost {
            detail: detail.into(),
        }
    }

    pub(crate) fn domain(lo: &crate::Rational, hi: &crate::Rational) -> Self {
        Error::InvalidDomain {
            lo: lo.to_string(),
            hi: hi.to_string(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Rational(_)
            | Error::SelfLoop(_)
            | Error::VertexOutOfRange { .. }
            | Error::DimensionMismatch { .. } => 2,
            Error::NegativeCost { .. } => 3,
            Error::TooLarge { .. } => 4,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
