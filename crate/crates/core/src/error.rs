use thiserror::Error;

use crate::regime::Regime;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid load: {0}")]
    InvalidLoad(String),

    #[error("regime mismatch: {operation} requires {expected}, got {found}")]
    Regime {
        operation: &'static str,
        expected: &'static str,
        found: Regime,
    },

    #[error("factorization failed at pivot {pivot}: matrix is not positive definite")]
    NotPositiveDefinite { pivot: usize },

    #[error("mode {index} ({n1}, {n2}): {source}")]
    Mode {
        index: usize,
        n1: i32,
        n2: i32,
        #[source]
        source: Box<Error>,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::InvalidMesh(_)
            | Error::InvalidLoad(_)
            | Error::Config(_)
            | Error::Json(_)
            | Error::Io(_) => 2,
            Error::Regime { .. } => 3,
            Error::NotPositiveDefinite { .. } | Error::Numerical(_) => 4,
            Error::Mode { source, .. } => source.exit_code(),
        }
    }
}
