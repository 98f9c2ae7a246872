use thiserror::Error;

use crate::scalar::ScalarError;

/// Errors raised by the kernel: scalars, exponential polynomials,
/// operators and the verifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(
        "exp({exponent}) is not known exactly; declare it in the exponential table \
         or switch to the float backend"
    )]
    NonExactExponential { exponent: String },
    #[error("exp({exponent}) declared twice with different values ({first} and {second})")]
    DuplicateExponential {
        exponent: String,
        first: String,
        second: String,
    },
    #[error("declared exp({exponent}) = {declared} contradicts the known value {known}")]
    InconsistentExponential {
        exponent: String,
        declared: String,
        known: String,
    },
    #[error("evaluation overflow: |Re(mu*z)| = {magnitude} exceeds the binary64 range")]
    Overflow { magnitude: f64 },
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("invalid equation: {0}")]
    InvalidEquation(String),
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;
