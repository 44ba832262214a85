use std::fmt;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const SOLVE: i32 = 3;
    pub const USAGE: i32 = 64;
}

/// A failed command, carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: exit::USAGE,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: exit::PARSE,
            message: message.into(),
        }
    }

    pub fn solve(message: impl Into<String>) -> Self {
        CliError {
            code: exit::SOLVE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<isingtsp::Error> for CliError {
    fn from(e: isingtsp::Error) -> Self {
        match e {
            isingtsp::Error::Parse(_) => CliError::parse(e.to_string()),
            _ => CliError::solve(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
