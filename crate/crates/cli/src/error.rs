use asaf_core::infotheory::InfoError;
use asaf_core::matrix::{BuildError, DropError, EvalError};
use asaf_core::ConfigError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Drop(#[from] DropError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(e) => e.code(),
            CliError::Build(_) => "model-mismatch",
            CliError::Drop(DropError::Build(_)) => "model-mismatch",
            CliError::Drop(DropError::EmptyPlan(_)) => "empty-plan",
            CliError::Drop(_) => "bad-plan",
            CliError::Eval(_) => "unresolved-symbol",
            CliError::Info(e) => e.code(),
            CliError::Usage(_) => "usage",
            CliError::Schema(_) => "schema-mismatch",
            CliError::Io(_) => "io",
            CliError::Csv(_) => "csv",
            CliError::Json(_) => "spec-parse",
        }
    }

    /// 2 for validation errors, 3 for runtime and data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Build(_) | CliError::Usage(_) | CliError::Json(_) => 2,
            CliError::Drop(DropError::Build(_)) => 2,
            CliError::Info(
                InfoError::InvalidSnr(_) | InfoError::NegativeRate(_) | InfoError::NoTrials | InfoError::InvalidRegime(_),
            ) => 2,
            CliError::Info(InfoError::Build(_)) => 2,
            _ => 3,
        }
    }
}
