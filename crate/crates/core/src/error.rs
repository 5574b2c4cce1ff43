use std::path::PathBuf;

use thiserror::Error;

use crate::oracle::OracleError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown concept id {0}")]
    UnknownConceptId(u32),
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("instance `{id}`: {reason}")]
    InvalidInstance { id: String, reason: String },
    #[error("the empty concept set cannot be tested for sufficiency")]
    EmptySet,
    #[error("concept set {0:?} is not sufficient")]
    NotSufficient(Vec<u32>),
    #[error("instance `{id}`: reference score {score} is not positive")]
    NonPositiveReference { id: String, score: f64 },
    #[error("{what}: size {size} exceeds limit {limit}")]
    LimitExceeded { what: &'static str, size: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("instance `{0}` has no minimally sufficient explanation")]
    Unexplained(String),
    #[error("no instances to aggregate")]
    NoInstances,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl ToString) -> Self {
        Error::Parse { path: path.into(), line, message: message.to_string() }
    }
}
