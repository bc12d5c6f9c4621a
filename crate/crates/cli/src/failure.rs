use std::fmt;
use std::process::ExitCode;

/// Exit status classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Invalid = 1,
    Partial = 2,
    Internal = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

/// A command error tagged with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

/// Bad input or configuration, detected before or instead of doing work.
pub fn invalid(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        status: Status::Invalid,
        error: error.into(),
    }
}

/// Failure that is not the caller's fault, such as an unwritable output.
pub fn internal(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        status: Status::Internal,
        error: error.into(),
    }
}

pub type CmdResult<T = Status> = Result<T, Failure>;

pub trait Context<T> {
    fn invalid_ctx(self, what: impl fmt::Display) -> CmdResult<T>;
    fn internal_ctx(self, what: impl fmt::Display) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> Context<T> for Result<T, E> {
    fn invalid_ctx(self, what: impl fmt::Display) -> CmdResult<T> {
        self.map_err(|e| invalid(e.into().context(what.to_string())))
    }

    fn internal_ctx(self, what: impl fmt::Display) -> CmdResult<T> {
        self.map_err(|e| internal(e.into().context(what.to_string())))
    }
}
