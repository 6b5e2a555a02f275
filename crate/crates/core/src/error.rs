use thiserror::Error;

/// Errors produced by the fitting library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no data at or above cutoff a = {a}")]
    EmptyTail { a: u64 },

    #[error("degenerate data: all {n_a} values equal the cutoff a = {a}, likelihood is unbounded in beta")]
    Degenerate { a: u64, n_a: u64 },

    #[error("maximizer did not converge: {0}")]
    NonConvergence(String),

    #[error("sample contains value {value} below model cutoff a = {a}")]
    Mismatch { a: u64, value: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("input contains no data")]
    EmptyInput,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
