use thiserror::Error;

/// Errors raised by dataset validation, fold planning, model fitting and metrics.
///
/// Variant names are stable: the CLI prints [`Error::name`] on stderr.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("label at row {row} is {value}, expected 0 or 1")]
    NonBinaryLabel { row: usize, value: i64 },
    #[error("feature matrix has {rows} rows but {labels} labels were given")]
    ShapeMismatch { rows: usize, labels: usize },
    #[error("only one class is present")]
    SingleClass,
    #[error("fold {fold} has no training samples")]
    EmptyTrainingSet { fold: usize },
    #[error("too few samples: {0}")]
    TooFewSamples(String),
    #[error("fold size {p} does not divide sample count {n}")]
    IndivisibleFold { n: usize, p: usize },
    #[error("fold {fold}: no opposite-label sample left to exclude")]
    InsufficientOppositeClass { fold: usize },
    #[error("solver stopped after {iterations} iterations with gradient norm {grad_norm:e}")]
    NonConvergence { iterations: usize, grad_norm: f64 },
    #[error("expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sample variance is zero")]
    ZeroVariance,
    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("p-value {0} is outside (0, 1]")]
    InvalidP(f64),
    #[error("balance {balance} with n={n} leaves a class empty")]
    DegenerateBalance { balance: f64, n: usize },
    #[error("inputs disagree on sample ids or labels: {0}")]
    MisalignedLabels(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("fold {fold}: {source}")]
    InFold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// The contract name of the error, e.g. `IndivisibleFold`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonBinaryLabel { .. } => "NonBinaryLabel",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::SingleClass => "SingleClass",
            Error::EmptyTrainingSet { .. } => "EmptyTrainingSet",
            Error::TooFewSamples(_) => "TooFewSamples",
            Error::IndivisibleFold { .. } => "IndivisibleFold",
            Error::InsufficientOppositeClass { .. } => "InsufficientOppositeClass",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroVariance => "ZeroVariance",
            Error::TooFewValues { .. } => "TooFewValues",
            Error::InvalidP(_) => "InvalidP",
            Error::DegenerateBalance { .. } => "DegenerateBalance",
            Error::MisalignedLabels(_) => "MisalignedLabels",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IoError",
            Error::InFold { source, .. } => source.name(),
        }
    }

    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::InFold { source, .. } => source.is_io(),
            _ => false,
        }
    }

    pub(crate) fn in_fold(self, fold: usize) -> Error {
        match self {
            e @ Error::InFold { .. } => e,
            e => Error::InFold {
                fold,
                source: Box::new(e),
            },
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            Error::Io(e.to_string())
        } else {
            Error::Parse(e.to_string())
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.to_string())
        } else {
            Error::Parse(e.to_string())
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
