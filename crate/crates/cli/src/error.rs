use std::fmt;
use std::path::Path;

use respeak_core::Error;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    /// 1 for numeric failures of an otherwise valid request, 2 for bad input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                Error::RankDeficient { .. }
                | Error::ConstantResponse
                | Error::DegenerateDf { .. }
                | Error::UndefinedRank(_),
            ) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
