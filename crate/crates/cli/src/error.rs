use thiserror::Error;

/// Failure classes with distinct exit codes: 1 for runs that completed but
/// did not produce a verified answer, 2 for invalid configuration, 3 for
/// unreadable or malformed files.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Outcome(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    File(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Outcome(_) => 1,
            CliError::Config(_) => 2,
            CliError::File(_) => 3,
        }
    }

    pub fn config(err: impl std::fmt::Display) -> Self {
        CliError::Config(err.to_string())
    }

    pub fn outcome(err: impl std::fmt::Display) -> Self {
        CliError::Outcome(err.to_string())
    }

    pub fn file(context: &str, err: impl std::fmt::Display) -> Self {
        CliError::File(format!("{context}: {err}"))
    }
}
