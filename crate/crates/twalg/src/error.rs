use thiserror::Error;

/// Every fallible operation in the crate reports through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("ill-sorted term at {path}: {msg}")]
    IllSorted { path: String, msg: String },
    #[error("invalid: {0}")]
    Invalid(String),
    /// A mathematical precondition failed (for example a non-homomorphism).
    #[error("check failed: {0}")]
    Failed(String),
    #[error("resource limit exceeded: {what} needs {needed}, limit {limit}")]
    Resource {
        what: &'static str,
        needed: u128,
        limit: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

pub(crate) fn failed<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Failed(msg.into()))
}
