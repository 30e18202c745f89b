use thiserror::Error;

use crate::paths::MAX_ENUMERATION_CAP;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the domain of the operation.
    #[error("invalid {param}: {reason}")]
    Domain { param: &'static str, reason: String },

    /// A fixed-width structure cannot hold the requested range.
    #[error("capacity exceeded for {param}: need {required}, maximum is {capacity}")]
    Capacity {
        param: &'static str,
        required: usize,
        capacity: usize,
    },

    /// Exhaustive enumeration would exceed the configured prime cap.
    #[error(
        "enumeration cap exceeded: {required} primes needed but cap is {cap} ({})",
        cap_hint(*required)
    )]
    EnumerationCap { required: usize, cap: usize },

    #[error("search limit {limit} reached before finding member #{index}")]
    NotFound { index: usize, limit: u64 },
}

fn cap_hint(required: usize) -> String {
    if required <= MAX_ENUMERATION_CAP {
        format!("raise --cap to at least {required}")
    } else {
        format!("exhaustive enumeration is limited to {MAX_ENUMERATION_CAP} primes")
    }
}

impl Error {
    pub(crate) fn domain(param: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            param,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
