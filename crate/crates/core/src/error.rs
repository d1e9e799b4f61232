use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(
        "relation lattice has infinite index: diagonal entry {index} of the Smith form is zero"
    )]
    InfiniteQuotient { index: usize },

    #[error("invalid element {coords:?} for group with invariant factors {factors:?}")]
    InvalidElement { coords: Vec<u64>, factors: Vec<u64> },

    #[error("group order {order} exceeds the configured bound {bound}")]
    BoundExceeded { order: u64, bound: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("integer overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
