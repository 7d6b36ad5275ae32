use thiserror::Error;

/// Errors produced by the library. Variants map onto the CLI exit statuses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Text input (forms, h-vectors, tables) could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A closed-form result is only proven under hypotheses that do not hold here.
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    /// Random sampling never produced the certified generic h-vector.
    #[error("genericity failure after {attempts} attempts: expected {expected:?}, last draw gave {observed:?}")]
    Genericity {
        attempts: usize,
        expected: Vec<u64>,
        observed: Vec<u64>,
    },

    /// A constructed witness did not reproduce its claimed invariants.
    #[error("internal failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
