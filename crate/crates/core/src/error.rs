use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("project root {0} does not exist or is not a directory")]
    RootNotFound(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("rule manifest: {0}")]
    Rules(String),

    #[error("coverage report line {line}: {message}")]
    Coverage { line: usize, message: String },

    #[error("history store is locked by another writer ({0}); retry once it finishes")]
    StoreLocked(PathBuf),

    #[error("corrupted history record at byte offset {offset} (line {line}): {message}")]
    CorruptRecord { offset: u64, line: usize, message: String },

    #[error("unknown run id {requested}; available: {available}")]
    UnknownRun { requested: u64, available: String },

    #[error("unknown metric key `{key}`; valid keys: {valid}")]
    UnknownMetric { key: String, valid: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
