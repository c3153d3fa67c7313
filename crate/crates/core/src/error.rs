use thiserror::Error;

/// Errors raised by the library. Each variant carries a stable code used by
/// the command-line front end as an error prefix.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("cannot parse partition {0:?}")]
    ParsePartition(String),

    #[error("invalid partition {0:?}: parts must be weakly decreasing")]
    NotAPartition(Vec<u64>),

    #[error("partition has {len} rows but at most {max} are allowed")]
    TooManyRows { len: usize, max: usize },

    #[error("action spec syntax error: {0}")]
    ActionSyntax(String),

    #[error("action parameter out of range: {0}")]
    ActionParameter(String),

    #[error("state {state} is not valid for action {action}: {reason}")]
    InvalidState {
        state: String,
        action: String,
        reason: String,
    },

    #[error("row index {index} out of range 1..={rank}")]
    RowIndex { index: usize, rank: usize },

    #[error("removing a box from row {row} of {lambda} does not give a partition")]
    NotRemovable { lambda: String, row: usize },

    #[error("dimension of {lambda} evaluated to the non-integer {value}")]
    NonIntegralDimension { lambda: String, value: String },

    #[error("negative one-step coefficient {value} for {lambda} -> {mu}")]
    NegativeCoefficient {
        lambda: String,
        mu: String,
        value: String,
    },

    #[error("state space of {count} states exceeds the cap of {cap}")]
    ResourceCap { count: usize, cap: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("truncation budget exceeded: {0}")]
    Truncation(String),

    #[error("unknown identity suite {0:?}")]
    UnknownSuite(String),

    #[error("suite {suite} requires an oracle action, got {action}")]
    NotOracleAction { suite: String, action: String },

    #[error("orthogonalization degenerated at {0}")]
    Degenerate(String),

    #[error("jump-count limit of {0} reached")]
    JumpLimit(usize),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// Stable short code for this error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "E-DIV0",
            Error::ParseRational(_) | Error::ParsePartition(_) | Error::Format(_) => "E-PARSE",
            Error::NotAPartition(_) | Error::TooManyRows { .. } => "E-PARTITION",
            Error::ActionSyntax(_) | Error::ActionParameter(_) => "E-ACTION",
            Error::InvalidState { .. } | Error::RowIndex { .. } | Error::NotRemovable { .. } => {
                "E-STATE"
            }
            Error::NonIntegralDimension { .. }
            | Error::NegativeCoefficient { .. }
            | Error::Degenerate(_) => "E-INTERNAL",
            Error::ResourceCap { .. } | Error::Truncation(_) | Error::JumpLimit(_) => "E-LIMIT",
            Error::OutOfRange(_) | Error::Empty(_) => "E-RANGE",
            Error::UnknownSuite(_) | Error::NotOracleAction { .. } => "E-SUITE",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
