use std::path::PathBuf;

use thiserror::Error;

use crate::reader::ReaderError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("turn {turn_id} out of range for session with {num_turns} turns")]
    TurnOutOfRange { turn_id: usize, num_turns: usize },

    #[error("duplicate document id `{0}`")]
    DuplicateDocument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Reader(#[from] ReaderError),

    #[error("retrieval via {endpoint} failed: {message}")]
    Retrieval { endpoint: String, message: String },

    #[error("protocol error: {0}")]
    Protocol(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
