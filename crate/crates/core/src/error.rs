use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sample list")]
    EmptySamples,

    #[error("sample list {index} is empty")]
    EmptySamplesAt { index: usize },

    #[error("non-finite sample value {value} at position {position}")]
    NonFiniteSample { position: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid distance matrix: {0}")]
    DistanceMatrix(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("embedding error: {0}")]
    Embedding(String),

    #[error("empty group: {0}")]
    EmptyGroup(String),

    #[error("{path}:{line}: parse error: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: duplicate {kind} id {id}")]
    DuplicateId {
        path: PathBuf,
        line: usize,
        kind: &'static str,
        id: String,
    },

    #[error("{path}:{line}: dangling reference to unknown {kind} id {id}")]
    DanglingReference {
        path: PathBuf,
        line: usize,
        kind: &'static str,
        id: String,
    },

    #[error("{path}:{line}: setting {setting_id} has an empty candidate list")]
    EmptyCandidates {
        path: PathBuf,
        line: usize,
        setting_id: usize,
    },

    #[error("{path}:{line}: validation error: {message}")]
    Validation {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the filesystem rather than of the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
