use thiserror::Error;

/// Error raised while reading one of the line-based input formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("inconsistent order: {x}->{y} and {x}~>{y} disagree on being the unit")]
    InconsistentOrder { x: String, y: String },
    #[error("algebra `{0}` is not bounded")]
    Unbounded(String),
    #[error("algebra `{0}` is not distributive")]
    NotDistributive(String),
    #[error("{0} is not a deductive system")]
    NotADeductiveSystem(String),
    #[error("{0} is not a proper deductive system")]
    NotProper(String),
    #[error("the relation induced by {0} is not a congruence: {1}")]
    CongruenceFailure(String, String),
    #[error("(ds2) and (ds2') disagree on {0}")]
    ClosureMismatch(String),
    #[error("dimension {dimension} exceeds the limit {limit}")]
    DimensionTooLarge { dimension: usize, limit: usize },
    #[error("cone is not pointed (lineality space of dimension {0})")]
    NotPointed(usize),
    #[error("search space of {size} candidates exceeds the guard {limit}")]
    SearchTooLarge { size: u128, limit: u128 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("consistency alarm: {0}")]
    ConsistencyAlarm(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
