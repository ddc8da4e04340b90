use std::fmt;

/// Failures split by exit code: usage and domain errors exit 2, numeric and I/O failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<spindiscord::Error> for CliError {
    fn from(e: spindiscord::Error) -> Self {
        use spindiscord::Error as E;
        match e {
            E::Domain(_) | E::UnsupportedShape(_) | E::TooFewSamples { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}
