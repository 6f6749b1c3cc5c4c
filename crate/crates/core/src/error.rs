use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unresolved root cluster at {precision} bits")]
    UnresolvedCluster { precision: u32 },
    #[error("cannot decide whether a coefficient vanishes: {0}")]
    AmbiguousZero(String),
    #[error("truncation too short")]
    TruncationTooShort,
    #[error("truncation exhausted: {0}")]
    TruncationExhausted(String),
    #[error("not mini-regular: {0}")]
    NotMiniRegular(String),
    #[error("invalid co-slope {0}: must be positive")]
    InvalidCoSlope(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Errors that more precision or a deeper expansion might cure.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::UnresolvedCluster { .. } | Error::AmbiguousZero(_) | Error::Inconclusive(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
