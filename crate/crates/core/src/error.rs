use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable index {index} out of range for dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },

    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),

    #[error("singular evaluation: {0}")]
    Singular(&'static str),

    #[error("evaluation outside the function domain: {0}")]
    Domain(&'static str),

    #[error("could not draw a valid sample point after {attempts} attempts")]
    SamplingExhausted { attempts: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("operator {index} must have order 0")]
    NotOrderZero { index: usize },

    #[error("operation undefined for the zero operator")]
    ZeroOperator,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
