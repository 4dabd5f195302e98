//! Error type shared by every module of the toolkit.

use std::path::PathBuf;

use crate::series::MonthStamp;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input too short, constant, or otherwise unusable for the requested operation.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The regression design is rank deficient.
    #[error("singular design: collinear columns [{}]", .columns.join(", "))]
    SingularDesign { columns: Vec<String> },

    #[error("series `{name}` is still non-stationary after {max_d} difference(s) (ADF p = {p_value:.4})")]
    NonStationary {
        name: String,
        max_d: usize,
        p_value: f64,
    },

    #[error("alignment failed: series [{}] share no common month", .series.join(", "))]
    Alignment { series: Vec<String> },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("Cholesky factorization failed: {0}")]
    Cholesky(String),

    #[error("lookup failed: {0}")]
    Lookup(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}: row {row}, column `{column}`: {message}", .source_name)]
    Row {
        source_name: String,
        row: usize,
        column: String,
        message: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series `{name}` has a gap: month {missing} is missing")]
    Gap { name: String, missing: MonthStamp },

    #[error("posts without a topic label: {}", .ids.join(", "))]
    MissingLabel { ids: Vec<String> },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}
