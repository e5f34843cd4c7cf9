use alloc::string::String;
use core::fmt;

/// Errors reported by the exact kernels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Incompatible shapes or sizes (non-square input, length mismatch, ...).
    Dimension(String),
    /// A parameter outside its admissible range.
    Param(String),
    /// A configured size budget was exceeded; the message names the bound.
    Budget(String),
    /// Invariant violation that should be unreachable for valid inputs.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(m) => write!(f, "dimension error: {m}"),
            Error::Param(m) => write!(f, "invalid parameter: {m}"),
            Error::Budget(m) => write!(f, "budget exceeded: {m}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
