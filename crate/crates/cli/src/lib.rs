//! Library side of the `outage-bounds` binary: flag resolution, subcommand
//! implementations, and table serialization. Split out so integration tests
//! can exercise the exact formatting rules the binary uses.

pub mod commands;
pub mod options;
pub mod output;

/// Errors surfaced to the user, each mapped to a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, specs, or files named on the command line → exit 1.
    Usage(String),
    /// Failures inside the numerical routines → exit 2.
    Numeric(outage_bounds::Error),
    /// Output I/O failures → exit 2.
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) | CliError::Io(_) => 2,
        }
    }
}
