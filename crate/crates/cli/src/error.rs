use roabp_ips::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or unreadable input; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// Well-formed input that fails a check; exit status 1.
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invalid(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Dimacs { .. }
            | Error::Io(_)
            | Error::InvalidField(_)
            | Error::FieldMismatch(..)
            | Error::UnknownVariable(_)
            | Error::PartialAssignment(_) => CliError::Usage(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("malformed JSON: {e}"))
    }
}
