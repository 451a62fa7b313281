use thiserror::Error;

/// Errors raised by the algebra and classification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group parameter mismatch: k = {left} vs k = {right}")]
    ParamMismatch { left: i64, right: i64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not hermitian")]
    NotHermitian,

    #[error("certificate error: {0}")]
    Certificate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The input is well formed but cannot describe a closed 4-manifold.
    #[error("inconsistent invariants: {0}")]
    Inconsistent(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
