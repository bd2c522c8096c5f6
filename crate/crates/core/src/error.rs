use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised while loading resources, building features, or training.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    /// Write error on an output stream.
    #[error("write error: {0}")]
    Write(#[from] std::io::Error),

    /// Malformed line in a corpus, lexicon, or config file.
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A loaded resource violates a cross-line constraint.
    #[error("invalid resource: {0}")]
    Resource(String),

    /// Input data does not satisfy an operation's preconditions.
    #[error("invalid data: {0}")]
    Data(String),

    #[error("training failed: {0}")]
    Train(String),

    #[error("model file error: {0}")]
    Model(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
