//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A bar failed OHLC sanity checks (`line` is 1-based within the source).
    #[error("invalid bar at line {line}: {reason}")]
    InvalidBar { line: usize, reason: String },

    /// Input shorter than the operation's minimum length.
    #[error("series too short: length {len}, need at least {min}")]
    TooShort { len: usize, min: usize },

    /// Paired inputs of different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// A statistic that divides by a dispersion measure met a constant series.
    #[error("degenerate input for {0}: zero variance")]
    ZeroVariance(&'static str),

    /// A parameter is outside its documented range.
    #[error("invalid {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// More than the tolerated share of variance observations was dropped
    /// while strict mode was on.
    #[error("dropped {dropped} of {total} variance observations ({percent:.1}%), above the 5% strict-mode threshold")]
    ExcessiveDrops {
        dropped: usize,
        total: usize,
        percent: f64,
    },

    /// CSV row that could not be parsed.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// Required column missing from the CSV header.
    #[error("missing column: {0}")]
    MissingColumn(String),

    /// Date filter left no rows.
    #[error("no rows remain after date filtering")]
    EmptyRange,

    /// Bootstrap kept producing degenerate resamples past the redraw cap.
    #[error("bootstrap degenerate: {redraws} redraws exhausted the cap of {cap}")]
    DegenerateBootstrap { redraws: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// Failure while rendering output.
    #[error("format error: {0}")]
    Format(String),

    /// An error annotated with the pipeline stage that produced it.
    #[error("[{stage}] {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap the error with a stage label for diagnostics.
    pub fn in_stage(self, stage: impl Into<String>) -> Error {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
