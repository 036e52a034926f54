use std::fmt;

/// Exit code when every check passes.
pub const EXIT_PASS: u8 = 0;
/// A residual exceeded its tolerance.
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
/// Collapse, step-size underflow, boundary contamination and the like.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config { field: String, reason: String },
    Numerical(String),
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::config("--out", format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, reason } => {
                write!(f, "configuration error in `{field}`: {reason}")
            }
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Errors raised while running a validated scenario. Bad parameters that only
/// surface at run time still count as configuration errors.
impl From<qclock_core::Error> for CliError {
    fn from(e: qclock_core::Error) -> Self {
        use qclock_core::Error as E;
        match e {
            E::InvalidParameter { name, reason } => CliError::config(name, reason),
            E::OutOfRange { .. } | E::PacketTooWide(_) | E::InsufficientSamples { .. } => {
                CliError::config("scenario", e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}
