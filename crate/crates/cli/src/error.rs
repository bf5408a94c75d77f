use midas_core::corpus::CorpusError;
use midas_core::matching::MatchingError;
use midas_core::sweep::SweepError;

/// Failure classes with stable exit codes: 1 for domain or validation
/// failures, 2 for usage and I/O problems.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }

    pub fn io(context: impl std::fmt::Display, e: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io { .. } => CliError::Io(e.to_string()),
            CorpusError::InvalidRule(_) | CorpusError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Io { .. } => CliError::Io(e.to_string()),
            SweepError::InvalidGrid(_) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<MatchingError> for CliError {
    fn from(e: MatchingError) -> Self {
        match e {
            MatchingError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}
