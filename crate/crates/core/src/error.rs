use thiserror::Error;

/// Errors raised by the library. Search exhaustion is never an error; it is
/// reported in-band through the verdict types.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i64, rank: u32 },
    #[error("alphabet mismatch: rank {left} vs rank {right}")]
    AlphabetMismatch { left: u32, right: u32 },
    #[error("expected {expected} generator images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("images do not define an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("outer automorphism has no finite order up to power {0}")]
    NotFiniteOrder(u32),
    #[error("{l} does not divide the outer order {k}")]
    NotADivisor { l: u32, k: u32 },
    #[error("tuple arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("invariant violated: {0}")]
    Falsified(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Shift a single-line parse error onto a given line of a larger file.
    pub(crate) fn at_line(self, line: usize, column_offset: usize) -> Self {
        match self {
            Error::Parse {
                column, message, ..
            } => Error::Parse {
                line,
                column: column + column_offset,
                message,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
