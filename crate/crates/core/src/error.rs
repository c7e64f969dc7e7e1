use std::io;

use thiserror::Error;

/// Errors raised while reading, writing, or processing corpora.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in document {doc:?}, sentence {sentence}, token {token} (line {line}): {message}")]
    Parse {
        doc: String,
        sentence: usize,
        token: usize,
        line: usize,
        message: String,
    },

    #[error("duplicate document id {0:?}")]
    DuplicateDocument(String),

    #[error("cannot write document {doc:?}: {message}")]
    Write { doc: String, message: String },

    #[error("invalid entity set: {0}")]
    InvalidEntities(String),

    #[error("documents without a counterpart: {}", .0.join(", "))]
    UnmatchedDocuments(Vec<String>),

    #[error("{0}")]
    Mismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Config(String),

    #[error("sentence {sentence} of document {doc:?} has no parse tree")]
    MissingParse { doc: String, sentence: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
