use thiserror::Error;

/// Errors raised by estimators, null models, adjustments and data loading.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,
    #[error("sample too small: need at least {needed} pairs, got {got}")]
    SampleTooSmall { needed: usize, got: usize },
    #[error("zero variance in {0}")]
    DegenerateVariance(&'static str),
    #[error("grid needs at least 2 bins on each axis, got {rows}x{cols}")]
    DegenerateGrid { rows: usize, cols: usize },
    #[error("row category {0} has no observations")]
    EmptyCategory(usize),
    #[error("alpha must lie in (0, 1], got {0}")]
    BadAlpha(f64),
    #[error("need at least 2 permutations, got {0}")]
    InsufficientPermutations(usize),
    #[error("maximum value {max} does not exceed the null mean {mean}")]
    DegenerateNormalizer { max: f64, mean: f64 },
    #[error("null variance is zero")]
    DegenerateNullVariance,
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("no column pair reaches the minimum sample size {0}")]
    NoEligiblePairs(usize),
    #[error("target has fewer than two classes")]
    DegenerateTarget,
    #[error("column `{column}` is {found}, expected {expected}")]
    IncompatibleColumn {
        column: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("io: {0}")]
    Io(String),
    #[error("model format: {0}")]
    Format(String),
}

impl Error {
    /// Stable machine-readable identifier of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptySample => "empty-sample",
            Error::SampleTooSmall { .. } => "sample-too-small",
            Error::DegenerateVariance(_) => "degenerate-variance",
            Error::DegenerateGrid { .. } => "degenerate-grid",
            Error::EmptyCategory(_) => "empty-category",
            Error::BadAlpha(_) => "bad-alpha",
            Error::InsufficientPermutations(_) => "insufficient-permutations",
            Error::DegenerateNormalizer { .. } => "degenerate-normalizer",
            Error::DegenerateNullVariance => "degenerate-null-variance",
            Error::UnknownColumn(_) => "unknown-column",
            Error::NoEligiblePairs(_) => "no-eligible-pairs",
            Error::DegenerateTarget => "degenerate-target",
            Error::IncompatibleColumn { .. } => "incompatible-column",
            Error::RaggedRow { .. } => "ragged-row",
            Error::DuplicateColumn(_) => "duplicate-column",
            Error::LengthMismatch(_) => "length-mismatch",
            Error::InvalidConfig(_) => "invalid-config",
            Error::Io(_) => "io",
            Error::Format(_) => "format",
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
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::BadAlpha(alpha))
    }
}
