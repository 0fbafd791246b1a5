use thiserror::Error;

use mlosc_core::Error as CoreError;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_UNSTABLE: i32 = 4;
pub const EXIT_PRECONDITION: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config, polynomial text or parameters.
    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Precondition(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Core(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_precondition() {
            return CliError::Precondition(e.to_string());
        }
        match e {
            CoreError::InvalidParams { .. }
            | CoreError::InvalidPolynomial(_)
            | CoreError::DimensionMismatch { .. }
            | CoreError::InvalidDomain(_)
            | CoreError::InvalidAmplitude(_)
            | CoreError::InvalidArgument(_)
            | CoreError::NonFinite(_)
            | CoreError::CaseRouting(_)
            | CoreError::InsufficientPoints(_) => CliError::Input(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Io(_) | CliError::Csv(_) | CliError::Core(_) => EXIT_FAILURE,
        }
    }
}
