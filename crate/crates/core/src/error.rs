use alloc::string::String;
use core::fmt;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation that needs at least one unit received none.
    EmptyInput,
    /// A parameter outside its documented domain.
    InvalidArgument(String),
    /// Min-max scaling over values that are all equal.
    DegenerateScale,
    /// An unsmoothed model assigned probability zero to an observed event.
    ZeroProbability,
    /// Fewer languages than the operation needs.
    TooFewLanguages { needed: usize, got: usize },
    /// A gold label that the model does not know.
    UnknownLabel(String),
    /// Two sequences that must be aligned have different lengths.
    LengthMismatch { left: usize, right: usize },
    /// A text format could not be parsed; `line` is 1-based.
    Parse { line: usize, message: String },
    /// An `I-X` tag that does not continue an `X` chunk.
    MalformedBio { position: usize, tag: String },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput => f.write_str("empty input"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DegenerateScale => f.write_str("degenerate scale: all raw scores are equal"),
            Error::ZeroProbability => f.write_str(
                "zero-probability event under an unsmoothed model; use backoff or kneser-ney smoothing",
            ),
            Error::TooFewLanguages { needed, got } => {
                write!(f, "need at least {needed} languages, got {got}")
            }
            Error::UnknownLabel(label) => write!(f, "unknown label {label:?}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::MalformedBio { position, tag } => {
                write!(f, "malformed BIO sequence: {tag} at position {position} does not continue a chunk")
            }
        }
    }
}

impl core::error::Error for Error {}
