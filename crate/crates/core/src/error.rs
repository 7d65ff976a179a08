use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed expression source. Columns and lines are 1-based.
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    UnknownFunction {
        name: String,
        line: usize,
        column: usize,
    },
    UnboundVariable {
        name: String,
    },
    /// A real function was applied outside its domain.
    Domain {
        expr: String,
        reason: &'static str,
    },
    /// Rank deficiency in a frame construction or a singular metric.
    Degenerate {
        what: &'static str,
        index: usize,
    },
    /// A documented precondition did not hold.
    Contract(String),
    InvalidParameter(String),
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax { line, column, expected, found } => {
                write!(f, "syntax error at {line}:{column}: found {found}, expected one of ")?;
                for (i, e) in expected.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(e)?;
                }
                Ok(())
            }
            Error::UnknownFunction { name, line, column } => {
                write!(f, "unknown function `{name}` at {line}:{column}")
            }
            Error::UnboundVariable { name } => write!(f, "unbound variable `{name}`"),
            Error::Domain { expr, reason } => write!(f, "domain error in `{expr}`: {reason}"),
            Error::Degenerate { what, index } => write!(f, "degenerate {what} at index {index}"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Dimension { what, expected, found } => {
                write!(f, "dimension mismatch for {what}: expected {expected}, found {found}")
            }
        }
    }
}
