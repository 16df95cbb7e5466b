use thiserror::Error;

use crate::textio::SourceSpan;

/// Errors raised by parsing, validation, evaluation and the reductions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{span}: {message}")]
    Parse { span: SourceSpan, message: String },

    #[error("vocabulary error: {0}")]
    Vocabulary(String),

    #[error("invalid structure: {0}")]
    Structure(String),

    #[error("variable `{0}` is not assigned")]
    Unassigned(String),

    #[error("invalid assignment: {0}")]
    Assignment(String),

    #[error("unsupported feature: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("formula has no Σ_t level: {0}")]
    Unclassified(String),

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

impl Error {
    pub(crate) fn parse(span: SourceSpan, message: impl Into<String>) -> Self {
        Error::Parse {
            span,
            message: message.into(),
        }
    }

    /// The source location for parse errors.
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            Error::Parse { span, .. } => Some(*span),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
