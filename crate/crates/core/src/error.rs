use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall in three families: malformed textual input, violated
/// mathematical preconditions, and exhausted search/enumeration budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("zero character or direction: {0}")]
    ZeroVector(String),

    #[error("singular curve: discriminant vanishes")]
    SingularCurve,

    #[error("precision {prec} too small: {reason}")]
    Precision { prec: i64, reason: String },

    #[error("directions {0} and {1} are parallel")]
    ParallelDirections(String, String),

    #[error("direction {0} is not part of the window")]
    UnknownDirection(String),

    #[error("pole order {order} exceeds the pole cap {cap}")]
    PoleCap { order: u32, cap: u32 },

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("negative coefficient in divisor: mixed-sign divisors are not supported")]
    MixedSign,

    #[error("unsupported direction {0} for the axis-aligned oracle")]
    UnsupportedDirection(String),

    #[error("search budget {0} exceeded")]
    Budget(u64),

    #[error("no integral solution: {0}")]
    NoIntegralSolution(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn precision(prec: i64, reason: impl Into<String>) -> Self {
        Error::Precision {
            prec,
            reason: reason.into(),
        }
    }

    /// Parse errors, precondition failures and budget errors map to distinct
    /// process exit codes in the command-line front end.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
