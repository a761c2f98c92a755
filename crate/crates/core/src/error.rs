use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller violated a documented precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// A configured search, width or oracle bound was exceeded.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    /// A forced counting route cannot be applied to this instance.
    #[error("route infeasible: {0}")]
    RouteInfeasible(String),
    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
