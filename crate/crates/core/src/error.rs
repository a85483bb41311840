use thiserror::Error;

/// Errors raised by ring construction, enumeration and the duality checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("cannot parse ring spec {0:?}")]
    RingParse(String),
    #[error("operands belong to different rings")]
    MixedRing,
    #[error("cyclotomic operands have different orders ({0} vs {1})")]
    MixedOrder(u32, u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("enumeration guard exceeded: {what} needs {needed} elements, limit is {limit}")]
    GuardExceeded {
        what: String,
        needed: u64,
        limit: u64,
    },
    #[error("partitions live on different spaces")]
    SpaceMismatch,
    #[error("submodule {0} is not contained in submodule {1}")]
    NotComparable(usize, usize),
    #[error("submodule is not of rank 1")]
    NotRankOne,
    #[error("refinement precondition violated: {0}")]
    RefinementViolated(String),
    #[error("missing class: {0}")]
    MissingClass(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
