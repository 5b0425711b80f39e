use thiserror::Error;

/// Errors produced by scoring, annotation parsing, and regression fitting.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("hypothesis corpus has {hyp} segments but reference corpus has {reference}")]
    LengthMismatch { hyp: usize, reference: usize },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("hypothesis is empty while the reference is not")]
    EmptyHypothesis,
    #[error("reference is empty")]
    EmptyReference,
    #[error("language resources are empty; the Polish-adapted METEOR variant needs stems, synonyms or function words")]
    MissingResources,
    #[error("rank statistic undefined: {0}")]
    UndefinedRank(String),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("invalid record{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    InvalidRecord { line: Option<u64>, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("need more than {needed} rows to fit, got {rows}")]
    TooFewRows { rows: usize, needed: usize },
    #[error("design matrix is rank deficient at column `{column}`")]
    RankDeficient { column: String },
    #[error("response column has zero variance")]
    ConstantResponse,
    #[error("degenerate degrees of freedom: n={n}, k={k}")]
    DegenerateDf { n: usize, k: usize },
    #[error("missing value for predictor `{0}`")]
    MissingPredictor(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
