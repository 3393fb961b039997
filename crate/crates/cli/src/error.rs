use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl From<misolab_core::Error> for CliError {
    fn from(e: misolab_core::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

/// Exit code of a verify run with at least one violated invariant.
pub const SUITE_VIOLATION: i32 = 4;
