use chdisc_core::Error;

pub const EXIT_OK: i32 = 0;
/// A check ran and failed.
pub const EXIT_FAIL: i32 = 2;
/// Bad input or environment.
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("check failed: {0}")]
    Failed(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => EXIT_FAIL,
            CliError::Invalid(_) | CliError::Io { .. } => EXIT_INVALID,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Library errors from bad data are input errors; solver trouble is a failed check.
pub fn classify(e: Error) -> CliError {
    match e {
        Error::NoConvergence { .. } | Error::ConvergedInvalid(_) | Error::Quadrature { .. } | Error::HolonomyMismatch(_) => {
            CliError::Failed(e.to_string())
        }
        _ => CliError::Invalid(e.to_string()),
    }
}
