use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("invalid graded space: {0}")]
    InvalidSpace(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("axiom violated: {0}")]
    Axiom(String),
    #[error("invalid retraction: {0}")]
    Retraction(String),
    #[error("unsupported over this field: {0}")]
    Unsupported(String),
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid window: {0}")]
    Window(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A certificate that should hold by construction did not; indicates a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
