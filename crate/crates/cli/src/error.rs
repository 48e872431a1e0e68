use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    Usage(String),
    #[error("malformed document: {0}")]
    Document(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("solver did not converge: {0}")]
    NoConvergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::NoConvergence(_) => 3,
            CliError::Usage(_) | CliError::Document(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<composite_pulses::Error> for CliError {
    fn from(e: composite_pulses::Error) -> Self {
        match e {
            composite_pulses::Error::NoConvergence { .. } => CliError::NoConvergence(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
