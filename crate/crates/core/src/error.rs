use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("duplicate item id `{0}`")]
    DuplicateItem(String),

    #[error("duplicate IDE tag {0}")]
    DuplicateIde(i64),

    #[error("unknown item id `{0}`")]
    UnknownItem(String),

    #[error("basket `{0}` appears in non-contiguous rows; use `load_baskets` for unsorted input")]
    NonContiguousBasket(String),

    #[error("no baskets to build a vocabulary from")]
    EmptyBaskets,

    #[error("vocabulary is empty")]
    EmptyVocabulary,

    #[error("embedding space is empty")]
    EmptySpace,

    #[error("co-occurrence matrix has no entries")]
    EmptyCooccurrence,

    #[error("self-edge on `{0}`")]
    SelfEdge(String),

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("objective became non-finite at epoch {epoch}")]
    NonFinite { epoch: usize },

    #[error("node {0} has zero preservation weight and no edges")]
    UndefinedUpdate(usize),

    #[error("cold start needs at least one item in the target category")]
    EmptyTargetSet,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
