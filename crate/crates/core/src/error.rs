use thiserror::Error;

/// Errors shared by every module of the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown id: {0}")]
    Lookup(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
