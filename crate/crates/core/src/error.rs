use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{source_name}, line {line}: {message}")]
    Malformed {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("duplicate article id `{id}` at line {line}")]
    DuplicateId { id: String, line: usize },

    #[error("unknown category `{0}`")]
    UnknownCategory(String),

    #[error("unknown article id `{0}`")]
    UnknownArticle(String),

    #[error("no articles selected")]
    EmptySelection,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("frequency match unreachable: {}", format_shortfall(.0))]
    Unreachable(Vec<Shortfall>),

    #[error("vocabulary is empty (min_count = {min_count})")]
    EmptyVocabulary { min_count: u64 },

    #[error("word `{0}` is not in the vocabulary")]
    OutOfVocabulary(String),

    #[error("vector for `{0}` has zero norm")]
    ZeroVector(String),

    #[error("feature axis `{0}` is degenerate (norm below 1e-12)")]
    DegenerateAxis(String),

    #[error("row {row}: expected {expected} values, found {found}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("bootstrap resample stayed degenerate after {0} redraws")]
    DegenerateBootstrap(usize),

    #[error("pair ({0}, {1}) missing from scores")]
    MissingPair(String, String),

    #[error("cell ({0}, {1}) has no responses")]
    EmptyCell(String, String),

    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    #[error("too few participants: {0}")]
    TooFewParticipants(usize),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Per-word deficit reported when frequency matching cannot reach a target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortfall {
    pub word: String,
    pub wanted: u64,
    pub reached: u64,
}

fn format_shortfall(s: &[Shortfall]) -> String {
    s.iter()
        .map(|s| format!("{} {}/{}", s.word, s.reached, s.wanted))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
