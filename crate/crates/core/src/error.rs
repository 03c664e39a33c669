use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A caller-supplied value violates an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// A configured resource limit (basis size, degree, time) was exceeded.
    #[error("limit exceeded: {0}")]
    Limit(String),

    /// An internal consistency check failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn limit(msg: impl Into<String>) -> Self {
        Error::Limit(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
