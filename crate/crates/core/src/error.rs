use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed text input; `line` is 1-based in the original text.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A caller violated an operation precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The instance exceeds a configured capability limit (state budgets,
    /// packet-count caps). Distinct from `Argument` so front ends can report
    /// "too large" separately from "malformed".
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// An operation script is structurally invalid; `index` is the 0-based
    /// position of the offending operation.
    #[error("invalid script operation {index}: {msg}")]
    Script { index: usize, msg: String },

    /// A multicast destination cannot be reached from the source.
    #[error("destination {vertex} is unreachable from the source")]
    UnreachableDestination { vertex: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
