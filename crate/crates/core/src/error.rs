use thiserror::Error;

use crate::ComplexValue;

/// Errors raised by the numerical kernel, the root finder and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value after {step} iteration step(s)")]
    Overflow { step: usize },

    #[error("multiplier {lambda} is within {tol:e} of 1; the c-chart is not available")]
    ParabolicChart { lambda: ComplexValue, tol: f64 },

    #[error("found {found} of {expected} roots after {rounds} start-set round(s)")]
    IncompleteRoots { found: usize, expected: usize, rounds: usize },

    #[error("no divisor of {n} is a period of {z} within tolerance")]
    InconsistentRoot { z: ComplexValue, n: usize },

    #[error("orbit of {z} does not close under forward iteration")]
    Grouping { z: ComplexValue },

    #[error("found {found} orbits of exact period {n}, expected {expected}")]
    NonGenericParameter { n: usize, found: usize, expected: usize },

    #[error("result set already holds {bound} records, the upper bound")]
    BoundExceeded { bound: usize },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("malformed document at {field} (line {line}, column {column}): {message}")]
    Parse { field: String, line: usize, column: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
