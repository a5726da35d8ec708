use thiserror::Error;

use crate::linker::{LinkTrace, PreconditionReport};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    /// The pair has an arc s -> t, so no vertex set separates them.
    #[error("uncuttable pair: arc {s} -> {t} is present")]
    Uncuttable { s: usize, t: usize },

    #[error("search budget exhausted after {visited} node visits")]
    BudgetExhausted { visited: u64 },

    #[error("LEMMA-VIOLATION: no anchored pair of size {p} in a tournament on {n} >= 9p-6 vertices")]
    LemmaViolation { n: usize, p: usize },

    #[error("sets are not anchored: no linkage for permutation {perm:?}")]
    NotAnchored { perm: Vec<usize> },

    #[error("stage {stage} cannot be built: {reason}")]
    StageConstruction { stage: usize, reason: String },

    #[error("selection exhausted: {0}")]
    SelectionExhausted(String),

    #[error("Menger step found {found} disjoint paths, needed {needed}")]
    MengerFailure { found: usize, needed: usize },

    #[error("preconditions not met: {0}")]
    PreconditionViolation(PreconditionReport),

    #[error("assertion `{eq}` failed")]
    AssertionViolation { eq: String, trace: Box<LinkTrace> },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
