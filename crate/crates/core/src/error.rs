use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },

    #[error("unknown UPOS tag `{0}`")]
    UnknownUpos(String),

    #[error("missing metadata file {0}")]
    MissingFile(PathBuf),

    #[error("{file}:{line}: malformed record: {message}")]
    Malformed {
        file: PathBuf,
        line: usize,
        message: String,
    },

    #[error("conversation `{0}` has no movie id")]
    MissingMovieId(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("only {surviving} points in regime ({lo}, {hi}], need at least 3")]
    TooFewPoints { surviving: usize, lo: f64, hi: f64 },

    #[error("non-positive coordinate ({x}, {y}) in log-log fit")]
    NonPositive { x: f64, y: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("corpus is not POS-tagged (placeholder tag X only): {0}")]
    Untagged(String),

    #[error("no regime configured for {class} on {kind}")]
    MissingRegime { class: String, kind: String },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid clean rule `{pattern}`: {message}")]
    BadRule { pattern: String, message: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
