use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Caller-supplied data violates a documented precondition.
    InvalidInput(String),
    /// A metric matrix produced a negative squared distance beyond tolerance.
    InvalidMetric { radicand: f64 },
    /// The dissimilar-pair constraint cannot be satisfied by any matrix.
    InfeasibleConstraint,
    /// An annotation or query referenced a label id absent from the map.
    UnknownLabel(u64),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InvalidMetric { radicand } => {
                write!(f, "metric is not positive semi-definite (v^T M v = {radicand:e})")
            }
            Error::InfeasibleConstraint => {
                f.write_str("all dissimilar feature vectors are zero; constraint is infeasible")
            }
            Error::UnknownLabel(id) => write!(f, "unknown label id {id}"),
        }
    }
}

impl core::error::Error for Error {}
