use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A base term below 2 at a position j >= 1.
    #[error("b_{index} = {value} violates b_j >= 2")]
    InvalidTerm { index: usize, value: u64 },

    #[error("digit {index} is {digit}, exceeds b_{next} - 1 = {max}", next = index + 1)]
    DigitOutOfRange {
        index: usize,
        digit: String,
        max: String,
    },

    /// A construction parameter violates one of the side conditions, e.g. "requires c > 2b".
    #[error("{0}")]
    Constraint(String),

    #[error("{what} requires {name} >= {min}, got {got}")]
    IndexTooSmall {
        what: &'static str,
        name: &'static str,
        min: u64,
        got: u64,
    },

    #[error("enumeration bound exceeded: {requested} > {limit}")]
    EnumerationBound { requested: String, limit: u64 },
}

impl Error {
    pub(crate) fn constraint(msg: impl Into<String>) -> Self {
        Error::Constraint(msg.into())
    }
}
