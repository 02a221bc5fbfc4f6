use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller-supplied data violated a precondition (bad landmark set,
    /// degenerate region, out-of-range parameter, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The interpolation matrix failed the Cholesky factorization. The pivot
    /// index identifies the first landmark at which positive definiteness
    /// broke down (typically near-duplicate centers relative to the support).
    #[error("interpolation matrix is numerically not positive definite at pivot {pivot} (diagonal {diagonal:.3e})")]
    NotPositiveDefinite { pivot: usize, diagonal: f64 },

    /// A closed-form denominator of the four-landmark analysis vanished.
    #[error("singular four-landmark configuration: {0}")]
    SingularConfiguration(String),

    /// Malformed landmark or image file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
