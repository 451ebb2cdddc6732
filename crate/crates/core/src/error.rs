use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Inputs outside the physical or mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Bad configuration: unknown unit, malformed registry file, bad override.
    #[error("configuration error: {0}")]
    Config(String),
    /// Combination the closed forms do not cover.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numeric failure: {message} (achieved relative tolerance {achieved:e})")]
    Numeric { message: String, achieved: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
