use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector given as {0}")]
    ZeroVector(&'static str),
    #[error("{what} = {value} is out of range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("partition is not free: {0}")]
    NotFree(String),
    #[error("ground sets differ: {0}")]
    GroundMismatch(String),
    #[error("complex is not maximally biconnected")]
    NotMaximalBiconnected,
    #[error("complex is not full")]
    NotFull,
    #[error("not a bunch: {0}")]
    NotABunch(String),
    #[error("not a maximal bunch: {0}")]
    NotMaximalBunch(String),
    #[error("parameter is not generic: {0}")]
    NonGeneric(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inhomogeneous polynomial: {0}")]
    Inhomogeneous(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange {
            what,
            value: value as i64,
            min: min as i64,
            max: max as i64,
        });
    }
    Ok(())
}
