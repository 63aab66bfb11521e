use thiserror::Error;

/// Errors raised by the arithmetic and expansion routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid denominator: a surd denominator must be nonzero")]
    InvalidDenominator,
    #[error("unsupported field: radicand must be nonnegative")]
    UnsupportedField,
    #[error("field mismatch: sqrt({0}) and sqrt({1}) generate different fields")]
    FieldMismatch(String, String),
    #[error("divide by zero")]
    DivideByZero,
    #[error("invalid magnitude: {0}")]
    InvalidMagnitude(String),
    #[error("invalid expansion: {0}")]
    InvalidExpansion(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("the anthyphairesis is finite; no period exists")]
    FiniteAnthyphairesis,
    #[error("expansion did not close within {0} steps")]
    StepLimit(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
