use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("length mismatch: {left} hypotheses vs {right} reference sets")]
    LengthMismatch { left: usize, right: usize },

    #[error("hypothesis {index} has no references")]
    MissingReferences { index: usize },

    #[error("degenerate seed: {usable} usable pairs, need at least {needed}")]
    DegenerateSeed { usable: usize, needed: usize },

    #[error("dimension mismatch: source dim {src} vs target dim {tgt}")]
    DimMismatch { src: usize, tgt: usize },

    #[error("undefined correlation: {reason}")]
    UndefinedCorrelation { reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), line, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
