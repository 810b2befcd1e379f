use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("incompatible coefficient fields or ambient rings")]
    IncompatibleCoefficients,

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("budget exceeded in {context}: basis size {basis_size}, pending pairs {pending_pairs}")]
    BudgetExceeded {
        context: String,
        basis_size: usize,
        pending_pairs: usize,
    },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unbound name `{name}` at line {line}, column {column}")]
    Unbound { name: String, line: usize, column: usize },

    #[error("name `{name}` at line {line}, column {column} is already bound")]
    Rebinding { name: String, line: usize, column: usize },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn ring_mismatch(msg: impl Into<String>) -> Self {
        Error::RingMismatch(msg.into())
    }

    /// Stable short tag used in JSON error entries.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::IncompatibleCoefficients => "incompatible-coefficients",
            Error::RingMismatch(_) => "ring-mismatch",
            Error::InvalidInput(_) => "invalid-input",
            Error::PreconditionViolation(_) => "precondition-violation",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::Syntax { .. } => "syntax",
            Error::Unbound { .. } => "unbound-name",
            Error::Rebinding { .. } => "rebinding",
            Error::Io(_) => "io",
        }
    }
}
