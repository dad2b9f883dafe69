use bmv_core::BmvError;

/// Failures that stop a command before a report exists.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid input; exit code 2.
    #[error("{0}")]
    Input(String),
    /// Output could not be written; exit code 2.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl From<BmvError> for CliError {
    fn from(e: BmvError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Outcome of a command that produced a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A mathematical check failed; exit code 3.
    CheckFailed(String),
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed(_) => 3,
        }
    }
}
