use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("empty point file")]
    EmptyFile,
    #[error("line {line}: expected {expected} fields, found {found}")]
    MalformedRow {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: feature column {column} is not numeric: {value:?}")]
    NonNumeric {
        line: u64,
        column: String,
        value: String,
    },
    #[error("line {line}: feature column {column} is not finite")]
    NonFinite { line: u64, column: String },
    #[error("line {line}: label {label:?} is not in the class universe")]
    UnknownLabel { line: u64, label: String },
    #[error("header must contain a {0:?} column and at least one feature column")]
    BadHeader(String),
    #[error("duplicate class name {0:?}")]
    DuplicateClass(String),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid synthetic spec: {0}")]
    InvalidSynthSpec(String),
    #[error("index {index} out of range for dataset of {len} records")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("duplicate sample index {0}")]
    DuplicateIndex(usize),
    #[error("requested {requested} points from a dataset of {available}")]
    SampleTooLarge { requested: usize, available: usize },
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("class {0:?} is present in the sample but has population count 0")]
    EmptyStratum(String),
    #[error("empty histogram")]
    EmptyHistogram,
    #[error("invalid prior vector: {0}")]
    InvalidPriors(String),
    #[error("probability vector does not sum to 1 (sum = {0})")]
    NotNormalized(f64),
    #[error("node has no weight in any class")]
    EmptyNode,
    #[error("invalid tree parameters: {0}")]
    InvalidParams(String),
    #[error("empty training set")]
    EmptyTraining,
    #[error("point has {found} features, tree expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("truth and prediction lengths differ ({truth} vs {predicted})")]
    LengthMismatch { truth: usize, predicted: usize },
    #[error("label code {0} outside the class universe")]
    UnknownCode(u32),
    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error("no successful replicates to summarize")]
    NothingToSummarize,
    #[error("malformed result file: {0}")]
    MalformedResults(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
