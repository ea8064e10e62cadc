use std::fmt;

use covlab_core::Error;

/// Exit status contract of the `covlab` binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failure = 1,
    Usage = 2,
    Inconclusive = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn failure(message: impl Into<String>) -> CliError {
        CliError {
            status: Status::Failure,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError {
            status: Status::Usage,
            message: message.into(),
        }
    }

    /// Validation errors fail the input; guard and module errors refuse it.
    pub fn from_core(e: Error) -> CliError {
        let status = match &e {
            Error::CapExceeded { .. }
            | Error::Precondition { .. }
            | Error::Inadmissible { .. }
            | Error::TableExhausted { .. }
            | Error::NotFound(_) => Status::Usage,
            _ => Status::Failure,
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::from_core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
