use causal_surgery::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => 2,
            CliError::Invalid(_) => 1,
            CliError::Core(Error::NotIdentifiable { .. }) => 3,
            CliError::Core(Error::NoFullSupport { .. }) => 4,
            CliError::Core(_) => 1,
        }
    }
}
