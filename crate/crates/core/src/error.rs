use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{a} has no inverse modulo {q}")]
    NotInvertible { a: i64, q: u64 },

    #[error("sieve limit {limit} exceeds the memory cap of {cap} entries")]
    SieveCap { limit: u64, cap: u64 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("denominator product {0} does not fit in 64 bits")]
    DenominatorOverflow(u128),

    #[error("invalid grid point {num}/{den}")]
    InvalidGridPoint { num: i64, den: u64 },

    #[error("inconsistent major-arc anchor: {0}")]
    InconsistentAnchor(String),

    #[error("point {x} lies outside J({q},{a1}) = [{lo}, {hi}]")]
    OutsideInterval { x: f64, q: u64, a1: u64, lo: f64, hi: f64 },

    #[error("tolerance {tol} unachievable: {reason}")]
    Tolerance { tol: f64, reason: String },

    #[error("enclosure slack {ratio} exceeds the configured limit {limit}")]
    SlackExceeded { ratio: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
