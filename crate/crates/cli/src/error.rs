use std::fmt;
use std::process::ExitCode;

/// Failure of a subcommand, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid configuration, or bad arguments (exit 1).
    Config(String),
    /// A hard bound or internal consistency check failed at run time, or an
    /// outage validation row failed (exit 2).
    Invariant(String),
    /// Reading or writing a file failed (exit 3).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Io(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Invariant(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<secsched::Error> for CliError {
    fn from(e: secsched::Error) -> Self {
        use secsched::Error as E;
        match e {
            E::Config(_) | E::InvalidInput(_) | E::UnsupportedRegime { .. } | E::InfeasibleDelay { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
