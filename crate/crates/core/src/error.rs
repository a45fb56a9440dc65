use thiserror::Error;

/// Errors raised by the exact-arithmetic pipeline.
///
/// Variants fall into four classes, mirrored by [`Error::class`]: bad input
/// (parse and precondition failures), not enough series precision, resource
/// caps, and internal invariant violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("ramification must be positive, got {0}")]
    NonPositiveRamification(i64),
    #[error("expected {expected} matrix entries, found {found}")]
    WrongEntryCount { expected: usize, found: usize },
    #[error("negative exponent e^{exponent} in matrix entry {entry}")]
    NegativeExponent { entry: usize, exponent: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("the y-order {order} is below the ramification index {ramification}")]
    OrderBelowRamification { order: i64, ramification: u64 },
    #[error("not realizable as characteristic pairs: {0}")]
    NotRealizable(String),
    #[error("branches are not distinct: {0}")]
    NotDistinct(String),
    #[error("not regular semisimple: {0}")]
    NotRegularSemisimple(String),
    #[error("edge polynomial {0} has roots outside the supported cyclotomic fields")]
    UnsupportedCoefficientField(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("singularity is not isolated (no stabilization up to degree {0})")]
    NotIsolated(usize),
    #[error("branches do not form a complete factorization: {0}")]
    IncompleteFactorization(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Coarse outcome class of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Precision,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InsufficientPrecision(_) => ErrorClass::Precision,
            Error::Internal(_) => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }

    /// Stable snake-case tag used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownVariable { .. } => "UnknownVariable",
            Error::NonPositiveRamification(_) => "NonPositiveRamification",
            Error::WrongEntryCount { .. } => "WrongEntryCount",
            Error::NegativeExponent { .. } => "NegativeExponent",
            Error::InvalidInput(_) => "InvalidInput",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::OrderBelowRamification { .. } => "OrderBelowRamification",
            Error::NotRealizable(_) => "NotRealizable",
            Error::NotDistinct(_) => "NotDistinct",
            Error::NotRegularSemisimple(_) => "NotRegularSemisimple",
            Error::UnsupportedCoefficientField(_) => "UnsupportedCoefficientField",
            Error::SizeMismatch(..) => "SizeMismatch",
            Error::CapExceeded(_) => "CapExceeded",
            Error::NotIsolated(_) => "NotIsolated",
            Error::IncompleteFactorization(_) => "IncompleteFactorization",
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::Internal(_) => "InternalInvariantViolation",
        }
    }

    /// Byte offset into the offending source text, when known.
    pub fn location(&self) -> Option<usize> {
        match self {
            Error::Syntax { offset, .. } | Error::UnknownVariable { offset, .. } => Some(*offset),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
