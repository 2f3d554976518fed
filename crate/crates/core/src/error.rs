use thiserror::Error;

/// Errors produced by the solver toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A physical state failed the model's admissibility check.
    #[error("inadmissible state at {location}: {reason}")]
    InadmissibleState { location: String, reason: String },

    /// A high-order flux produced a non-finite or inadmissible intermediate.
    #[error("step failure at interface {interface} (Taylor level {level})")]
    StepFailure { interface: usize, level: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InadmissibleState { .. } => "inadmissible_state",
            Error::StepFailure { .. } => "step_failure",
            Error::NumericalFailure(_) => "numerical_failure",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
