use std::fmt;
use std::path::Path;

/// Failure of a command, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag combinations (exit 2).
    Usage(String),
    /// Unreadable or invalid input files and parameters (exit 3).
    Input(String),
    /// A size cap or iteration budget was exceeded (exit 4).
    Cap(String),
    /// Output could not be written, or an internal invariant broke (exit 1).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Cap(_) => 4,
            CliError::Internal(_) => 1,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Internal(format!("{}: {e}", path.display()))
    }

    pub fn read(path: &Path, e: impl fmt::Display) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Cap(m) => write!(f, "resource cap: {m}"),
            CliError::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<aqo_core::Error> for CliError {
    fn from(e: aqo_core::Error) -> Self {
        use aqo_core::Error as E;
        match e {
            E::Size { knob, .. } => CliError::Cap(format!("{e}; flag --{}", knob.replace('_', "-"))),
            E::Numerical { .. } => CliError::Cap(e.to_string()),
            E::Invariant(_) => CliError::Internal(e.to_string()),
            E::Input(_) | E::Generation(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(format!("json: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
