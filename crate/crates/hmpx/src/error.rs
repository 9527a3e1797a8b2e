use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Internal = 1,
    Validation = 2,
    Budget = 3,
    CheckFailed = 4,
    Io = 5,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    Validation(String),
    #[error("cannot read model file {path}: {source}")]
    ModelRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed model file {path}: {source}")]
    ModelParse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Engine(#[from] hmpx_core::Error),
}

impl CliError {
    pub fn exit_status(&self) -> ExitStatus {
        use hmpx_core::Error as E;
        match self {
            Self::Validation(_) | Self::ModelParse { .. } => ExitStatus::Validation,
            Self::ModelRead { .. } | Self::Write { .. } => ExitStatus::Io,
            Self::Engine(e) => match e {
                E::BudgetExceeded { .. } | E::BasisTooLarge { .. } => ExitStatus::Budget,
                E::SettlingViolation { .. } => ExitStatus::CheckFailed,
                E::UnreachableSequence(_) | E::SingularSystem => ExitStatus::Internal,
                _ => ExitStatus::Validation,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
