use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::CapabilityLimit`] is kept apart from input errors because the
/// command line maps it to a distinct exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight space: {0}")]
    InvalidSpace(String),
    #[error("measures live on different weight spaces")]
    SpaceMismatch,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid test family: {0}")]
    InvalidFamily(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid graphon: {0}")]
    InvalidGraphon(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("metric {0} is not available for this operation")]
    UnsupportedMetric(String),
    #[error("{what}: size {size} exceeds the limit {limit}; {hint}")]
    CapabilityLimit {
        what: &'static str,
        size: u128,
        limit: u128,
        hint: &'static str,
    },
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn is_capability_limit(&self) -> bool {
        matches!(self, Error::CapabilityLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
