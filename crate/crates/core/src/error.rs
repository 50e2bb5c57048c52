use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value is not {p}-integral (valuation {valuation})")]
    NotPIntegral { p: u64, valuation: i64 },

    #[error("Bernoulli index {index} exceeds the configured ceiling {ceiling}")]
    IndexCeilingExceeded { index: u64, ceiling: u64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("upper index {upto} is not below p = {p}")]
    UpperIndexNotBelowP { upto: u64, p: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache file line {line}: {reason}")]
    CacheFormat { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::HypothesisViolated(msg.into())
    }
}
