//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Group identifier outside the supported family.
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    /// A weight argument was expected to be dominant (all coordinates >= 0).
    #[error("weight {0:?} is not dominant")]
    NonDominantWeight(Vec<i64>),

    /// A scalar or structural argument was out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two central functions built over different groups were combined.
    #[error("mismatched root systems: {0} vs {1}")]
    MismatchedRootSystems(String, String),

    /// An iterative truncation failed to reach its tolerance within caps.
    #[error("series did not converge: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;
