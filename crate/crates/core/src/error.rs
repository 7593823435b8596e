//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The normal equations (or Toeplitz system) could not be solved.
    #[error("singular normal equations (dimension {dim})")]
    Singular { dim: usize },

    /// An AR model fails the strict stability check.
    #[error("unstable AR model: smallest characteristic root modulus {modulus}")]
    Unstable { modulus: f64 },

    /// Exhaustive support search refused to enumerate 2^m subsets.
    #[error("support universe too large for exhaustive search: m = {m} (limit {limit})")]
    UniverseTooLarge { m: usize, limit: usize },

    /// A fitted variance came out non-positive, so log-variance terms are undefined.
    #[error("degenerate fit: estimated innovation variance {sigma2} is not positive")]
    DegenerateVariance { sigma2: f64 },

    /// Invalid sweep or texture configuration.
    #[error("config error: {0}")]
    Config(String),

    /// The file does not start with a supported PGM magic number.
    #[error("{path}: unsupported magic {found:?} (expected P2 or P5)")]
    PgmUnsupportedMagic { path: PathBuf, found: String },

    /// The PGM header could not be parsed.
    #[error("{path}: malformed PGM header: {reason}")]
    PgmMalformedHeader { path: PathBuf, reason: String },

    /// The PGM pixel payload ended early.
    #[error("{path}: truncated PGM payload: expected {expected} samples, got {got}")]
    PgmTruncated {
        path: PathBuf,
        expected: usize,
        got: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 config, 3 data/ingestion, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::UniverseTooLarge { .. } => 2,
            Error::Io(_)
            | Error::PgmUnsupportedMagic { .. }
            | Error::PgmMalformedHeader { .. }
            | Error::PgmTruncated { .. } => 3,
            Error::Domain(_)
            | Error::Singular { .. }
            | Error::Unstable { .. }
            | Error::DegenerateVariance { .. } => 4,
        }
    }
}
