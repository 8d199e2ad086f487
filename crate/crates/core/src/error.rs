use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration file or phantom description could not be accepted.
    #[error("config error: {0}")]
    Config(String),

    /// A text artifact could not be parsed.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// The requested sampling has no pair inside the admissible region.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// The explicit solver produced a non-finite value.
    #[error("solver became unstable at time step {step}")]
    Instability { step: usize },

    /// A dense linear system could not be solved reliably.
    #[error("singular system (condition estimate {condition:.3e}): {context}")]
    Singular { condition: f64, context: String },

    #[error("reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
