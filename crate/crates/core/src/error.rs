use thiserror::Error;

/// Errors produced by the model, the simulator, and census ingestion.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DustError {
    /// A parameter failed its type invariant (non-finite, negative, zero speed, ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The inputs are valid but the requested quantity does not exist for them.
    #[error("domain error: {0}")]
    Domain(String),

    /// A simulation configuration cannot produce meaningful statistics.
    #[error("config error: {0}")]
    Config(String),

    /// A census row could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl DustError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        DustError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, DustError>;
