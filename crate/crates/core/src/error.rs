use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("G({m},{n}) is outside the closed-form table (needs m,n >= 2); use the exact solver")]
    OutOfTable { m: usize, n: usize },

    /// A node, time, or state budget ran out before the search finished.
    /// This is never a mathematical answer; retrying with larger limits may succeed.
    #[error("resource limit reached: {what}{}", last_k.map(|k| format!(" (last decided k = {k})")).unwrap_or_default())]
    ResourceLimit { what: String, last_k: Option<usize> },

    #[error("engine disagreement on {instance}: backtracking={backtracking}, frontier-dp={frontier}")]
    EngineDisagreement {
        instance: String,
        backtracking: String,
        frontier: String,
    },

    /// An engine produced a witness that fails validation.
    #[error("invalid witness for {instance}: {report}")]
    InvalidWitness { instance: String, report: String },

    #[error("coloring is not coherent")]
    NotCoherent,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}
