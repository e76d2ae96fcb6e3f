use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("{0} check(s) failed")]
    CheckFailed(usize),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Numeric(_) | CliError::Io { .. } => 3,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }
}

impl From<qnd_interface::Error> for CliError {
    fn from(e: qnd_interface::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
