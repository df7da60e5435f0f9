use std::process::ExitCode;

/// Failures of a CLI run, each tied to a stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, configuration or output path (exit 2).
    #[error("{0}")]
    Config(String),
    /// A numerical routine failed (exit 3).
    #[error("numerical failure: {0}")]
    Numerical(harvestkit::Error),
    /// A verification command found a failing check (exit 4).
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Verification(_) => 4,
        })
    }
}

impl From<harvestkit::Error> for CliError {
    fn from(e: harvestkit::Error) -> Self {
        match e {
            harvestkit::Error::InvalidParameter(m) => CliError::Config(m),
            other => CliError::Numerical(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
