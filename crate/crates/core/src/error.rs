use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown curve `{0}`")]
    UnknownCurve(String),

    #[error("invalid curve `{name}`: {reason}")]
    InvalidCurve { name: String, reason: String },

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("non-integral signature {numerator}/{denominator}")]
    Integrality { numerator: i64, denominator: i64 },

    #[error("fibration is not allowable: {0}")]
    NotAllowable(String),

    #[error("invalid spinal open book: {0}")]
    Topology(String),

    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown escape `\\{found}` at {line}:{column}")]
    UnknownEscape {
        line: usize,
        column: usize,
        found: char,
    },

    #[error("invalid plumbing graph: {0}")]
    Graph(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
