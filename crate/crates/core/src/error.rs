//! Error type shared by all modules.

/// Errors reported by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two signals or grids that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A translated or transformed profile does not fit the representable band.
    #[error("support overflow: {0}")]
    SupportOverflow(String),

    /// A linear system is numerically singular and no ridge was supplied.
    #[error("ill-posed system: {0}")]
    IllPosed(String),

    /// A correlation field has no extractable rank-one factor.
    #[error("degenerate field: {0}")]
    DegenerateField(String),

    /// Structured input (files, sample coordinates) failed validation.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// File I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
