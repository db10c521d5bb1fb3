use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operation not supported for {0} degrees")]
    UnsupportedKind(&'static str),

    #[error("degree kinds do not match: {0} vs {1}")]
    KindMismatch(&'static str, &'static str),

    #[error("degree {0} lies outside the truncation region")]
    OutsideRegion(String),

    #[error("{from} is not below {to}")]
    NotComparable { from: String, to: String },

    #[error("{0} must be a positive integer")]
    NotPositive(&'static str),

    #[error("invalid degree: {0}")]
    InvalidDegree(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("poset mismatch: {0}")]
    PosetMismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("incomparable degrees at {location}: generator degree {generator} is not below relation degree {relation}")]
    IncomparableDegrees {
        location: String,
        generator: String,
        relation: String,
    },

    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),

    #[error("box too large for this computation: {0}")]
    BoxTooLarge(String),

    #[error("unknown registry entry `{0}`")]
    UnknownRegistry(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
