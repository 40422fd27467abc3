//! Crate-wide error type.

use std::fmt;

/// Errors produced anywhere in the crate.
#[derive(Debug)]
pub enum Error {
    /// An input sequence was empty where at least one element is required.
    EmptyInput(&'static str),
    /// Matrix or vector dimensions do not line up.
    Dimension(String),
    /// A linear system was singular or rank-deficient.
    Singular(String),
    /// A matrix that must be unitary failed the orthonormality check.
    NotUnitary(String),
    /// A complexity or size guard was exceeded.
    SizeGuard(String),
    /// An argument value was invalid.
    InvalidInput(String),
    /// Configuration file problem, with file and line context.
    Config {
        path: String,
        line: usize,
        message: String,
    },
    /// I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::Singular(msg) => write!(f, "singular system: {msg}"),
            Error::NotUnitary(msg) => write!(f, "matrix is not unitary: {msg}"),
            Error::SizeGuard(msg) => write!(f, "size guard exceeded: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Config { path, line, message } => {
                write!(f, "{path}:{line}: {message}")
            }
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
