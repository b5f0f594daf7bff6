use thiserror::Error;

/// Errors raised while constructing model values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid IRI {iri:?}: {reason}")]
    InvalidIri { iri: String, reason: String },
    #[error("invalid literal {lexical:?}: {reason}")]
    InvalidLiteral { lexical: String, reason: String },
    #[error("invalid path segment {0:?}")]
    InvalidSegment(String),
    #[error("base IRI {0:?} must end with '/'")]
    InvalidBase(String),
    #[error("invalid prefix label {0:?}")]
    InvalidPrefix(String),
    #[error("prefix {0:?} is already bound")]
    DuplicatePrefix(String),
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
}
