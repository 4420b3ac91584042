use dimincr_core::Error;
use std::fmt;

/// Failure classes, each with its process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Invalid configuration or arguments (exit 2).
    Config(String),
    /// A cubature rule could not be constructed (exit 3).
    Construction(String),
    /// A search space exceeded the enumeration limit (exit 4).
    Enumeration(String),
    /// Anything else, including I/O (exit 1).
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Construction(_) => 3,
            CliError::Enumeration(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    /// Classifies an error raised while running (not while configuring).
    pub fn from_run(e: &Error) -> Self {
        let msg = e.to_string();
        match e.root() {
            Error::LatticeConstruction { .. } => CliError::Construction(msg),
            Error::EnumerationLimit { .. } => CliError::Enumeration(msg),
            _ => CliError::Other(msg),
        }
    }

    /// Classifies an error raised while building objects from the config.
    pub fn from_setup(e: &Error) -> Self {
        match e.root() {
            Error::LatticeConstruction { .. } | Error::EnumerationLimit { .. } => Self::from_run(e),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Construction(m) | CliError::Enumeration(m) | CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
