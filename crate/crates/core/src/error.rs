use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("unknown shape `{0}`")]
    UnknownShape(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown segment or dimension `{0}`")]
    UnknownDimension(String),
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("invalid value `{value}` for parameter `{key}`")]
    InvalidParam { key: String, value: String },
    #[error("feature value {0} is not trinary")]
    NotTrinary(i8),
    #[error("vector layout mismatch: expected width {expected}, found {found}")]
    LayoutMismatch { expected: usize, found: usize },
    #[error("segment `{0}` is not declared in this layout")]
    SegmentNotDeclared(&'static str),
    #[error("salience must be finite and nonnegative, got {0}")]
    InvalidSalience(f64),
    #[error("relation `{relation}` takes {expected} fillers, got {found}")]
    Arity {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("role sets differ between template and item")]
    RoleMismatch,
    #[error("degenerate display: no relevant feature dimensions")]
    DegenerateDisplay,
    #[error("invalid engine parameters: {0}")]
    InvalidParams(String),
    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("analysis: {0}")]
    Analysis(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
