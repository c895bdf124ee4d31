use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violated the documented precondition of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A time integration diverged or failed its refinement check.
    #[error("integration failure at t = {time}: {reason}")]
    IntegrationFailure { time: f64, reason: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
