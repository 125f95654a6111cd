use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised anywhere in the estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unstable feedback system: {0}")]
    Stability(String),

    #[error("weak identification: |{quantity}| = {magnitude:e} is below the denominator threshold")]
    WeakIdentification {
        quantity: &'static str,
        magnitude: f64,
    },

    #[error(
        "degenerate sensitivity denominator: |1 - S_xy*S_yx*R_w*R_z| = {magnitude:e} is below the threshold"
    )]
    DegenerateDenominator { magnitude: f64 },

    #[error("rank deficient design in {stage}: numerical rank {rank} < {columns} columns (condition estimate {condition:e})")]
    RankDeficient {
        stage: String,
        rank: usize,
        columns: usize,
        condition: f64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("too many failures: {failed} of {total} replicates did not produce an estimate (last error: {last})")]
    TooManyFailures {
        failed: usize,
        total: usize,
        last: String,
    },

    #[error("equilibrium iteration did not converge: gap {gap:e} exceeds tolerance {tol:e}")]
    NonConvergence { gap: f64, tol: f64 },

    #[error("invalid configuration at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("column `{0}` not found in input header")]
    MissingColumn(String),

    #[error("parse error at line {line}, column `{column}`: cannot read {value:?} as a number")]
    Parse {
        line: u64,
        column: String,
        value: String,
    },

    #[error("no rows left after applying the missing-value policy ({dropped} dropped)")]
    EmptyAfterFilter { dropped: usize },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Broad failure classes, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Estimation,
    Io,
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// The innermost error, with any context layers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self.root() {
            Error::Config { .. } | Error::Json(_) | Error::InvalidBasis(_) | Error::Stability(_) => {
                ErrorClass::Config
            }
            Error::MissingColumn(_)
            | Error::Parse { .. }
            | Error::EmptyAfterFilter { .. }
            | Error::InvalidData(_)
            | Error::Csv(_) => ErrorClass::Data,
            Error::Io { .. } => ErrorClass::Io,
            _ => ErrorClass::Estimation,
        }
    }

    /// Process exit code: 2 config, 3 data, 4 estimation, 5 I/O.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Config => 2,
            ErrorClass::Data => 3,
            ErrorClass::Estimation => 4,
            ErrorClass::Io => 5,
        }
    }
}

pub(crate) trait ResultExt<T> {
    fn context(self, context: impl FnOnce() -> String) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn context(self, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|e| e.context(context()))
    }
}
