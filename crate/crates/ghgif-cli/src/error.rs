use std::fmt;

/// CLI failure classes, each with its contract exit code:
/// 2 = bad parameters, 3 = I/O failure, 4 = internal-consistency failure.
#[derive(Debug)]
pub enum CliError {
    Param(String),
    Io(String),
    Inconsistency(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param(_) => 2,
            CliError::Io(_) => 3,
            CliError::Inconsistency(_) => 4,
        }
    }

    pub fn param(msg: impl Into<String>) -> Self {
        CliError::Param(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Param(m) => write!(f, "parameter error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Inconsistency(m) => write!(f, "internal consistency failure: {m}"),
        }
    }
}

impl From<ghgif::Error> for CliError {
    fn from(e: ghgif::Error) -> Self {
        use ghgif::Error as E;
        match e {
            E::InvalidParameter(_) | E::DimensionMismatch { .. } | E::NonFinite { .. } => {
                CliError::Param(e.to_string())
            }
            E::Io(_) | E::Format(_) => CliError::Io(e.to_string()),
            E::Inconsistency { .. } => CliError::Inconsistency(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
