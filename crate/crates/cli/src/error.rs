use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Core(quasint_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<quasint_core::Error> for CliError {
    fn from(e: quasint_core::Error) -> Self {
        match e {
            quasint_core::Error::Parse { line, column, message } => CliError::Syntax { line, column, message },
            other => CliError::Core(other),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
