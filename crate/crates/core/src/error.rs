use thiserror::Error;

use crate::words::MultiDegree;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty word")]
    EmptyWord,
    #[error("letter {letter} outside 1..={d}")]
    LetterOutOfRange { letter: u8, d: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("letter {0} has no assignment")]
    UnassignedLetter(u8),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("trace of degree {degree} cannot be reduced (needs degree > {bound})")]
    DegreeTooSmall { degree: usize, bound: usize },
    #[error("no rewrite for multidegree {0}: generator table does not generate this piece")]
    RewriteGap(MultiDegree),
    #[error("cutoff exceeded: {0}")]
    CutoffExceeded(String),
    #[error("too few degrees: need {need}, got {got}")]
    TooFewDegrees { need: usize, got: usize },
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
