//! Crate-wide error type.

use std::fmt;

use crate::pencil::Classification;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// Operand shapes violate the operation's contract.
    Dimension(String),
    /// A matrix that must be invertible is numerically singular; `rcond` is a
    /// cheap reciprocal-condition estimate from the pivot sequence.
    Singular { rcond: f64 },
    /// An argument is outside the operation's domain (not a shape problem).
    Argument(String),
    /// The input lies, numerically, in the measure-zero set excluded by a
    /// construction that only works on a dense open set of tensors.
    NotGeneric { rcond: f64 },
    /// A candidate set spans fewer than the required number of dimensions.
    RankDeficient { achieved: usize, required: usize },
    /// No rank-p decomposition was found within the full sampling budget; the
    /// attached classification explains what the sampler saw.
    NoDecomposition(Box<Classification>),
    /// A file could not be parsed at all (malformed JSON and similar).
    Parse(String),
    /// A file parsed but its contents violate the format's invariants.
    Validation(String),
    /// Underlying I/O failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::Singular { rcond } => {
                write!(f, "matrix is numerically singular (rcond ~ {rcond:.3e})")
            }
            Error::Argument(msg) => write!(f, "invalid argument: {msg}"),
            Error::NotGeneric { rcond } => write!(
                f,
                "input is numerically non-generic for this construction (rcond ~ {rcond:.3e})"
            ),
            Error::RankDeficient { achieved, required } => {
                write!(f, "rank-deficient candidate set: spans {achieved} of {required} dimensions")
            }
            Error::NoDecomposition(c) => write!(
                f,
                "no rank-p decomposition found within budget ({} directions tried)",
                c.directions_tried
            ),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
