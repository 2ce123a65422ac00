use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input or violated precondition supplied by the caller.
    #[error("argument error: {0}")]
    Argument(String),

    /// A configured size bound would be exceeded.
    #[error("resource error: {what} (estimated {estimate}, bound {bound})")]
    Resource { what: String, estimate: u128, bound: u128 },

    /// A theorem hypothesis required by the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An internal consistency check failed; the message carries a witness.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    pub fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn resource(what: impl Into<String>, estimate: u128, bound: u128) -> Self {
        Error::Resource {
            what: what.into(),
            estimate,
            bound,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) | Error::Precondition(_) => 2,
            Error::Resource { .. } => 3,
            Error::Invariant(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
