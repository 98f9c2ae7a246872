//! Complex scalars under two backends.
//!
//! The kernel is generic over [`Scalar`]. Two families implement it:
//!
//! * [`Exact`]: elements of Q(i)(π, e), i.e. quotients of Laurent
//!   polynomials in the symbols `pi` and `e` with Gaussian-rational
//!   coefficients. Arithmetic is exact and the zero test is decidable.
//! * `Complex<T>` for any `T: num_traits::Float` (`f32`, `f64`), where zero
//!   tests go through an absolute tolerance supplied by the caller.
//!
//! [`ScalarValue`] is the runtime-tagged form used at the serialization
//! boundary; mixing its two variants is a [`ScalarError::BackendMismatch`].

mod exact;
mod float;
mod parse;
mod value;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use exact::{Exact, GaussRational};
pub use value::{NumOrStr, ScalarDoc, ScalarValue};

/// Which arithmetic a scalar uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("backend mismatch: {left} vs {right}")]
    BackendMismatch { left: Backend, right: Backend },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("value {0} is not representable in the exact backend")]
    NotExact(String),
}

/// Tolerances for one computation.
///
/// `zero` is the absolute threshold under which a float coefficient counts
/// as zero; `merge` is the distance under which two float frequencies are
/// the same frequency. Both are ignored by the exact backend.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub zero: f64,
    pub merge: f64,
}

impl Tolerance {
    pub const DEFAULT_ZERO: f64 = 1e-9;
    pub const DEFAULT_MERGE: f64 = 1e-9;

    pub fn new(zero: f64, merge: f64) -> Self {
        Tolerance { zero, merge }
    }

    pub fn with_zero(zero: f64) -> Self {
        Tolerance {
            zero,
            merge: Self::DEFAULT_MERGE,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            zero: Self::DEFAULT_ZERO,
            merge: Self::DEFAULT_MERGE,
        }
    }
}

/// A complex number usable as coefficient and frequency of an exponential
/// polynomial.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    /// Zero test under an absolute tolerance. Exact scalars ignore `tol`.
    fn is_zero_within(&self, tol: f64) -> bool;

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).is_zero_within(tol)
    }

    /// Multiplicative inverse, `None` when `self` is zero under `tol`.
    fn checked_inv(&self, tol: f64) -> Option<Self>;

    fn checked_div(&self, other: &Self, tol: f64) -> Option<Self> {
        other.checked_inv(tol).map(|inv| self.clone() * inv)
    }

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) * Self::from_i64(den).checked_inv(0.0).expect("nonzero denominator")
    }

    fn imag_unit() -> Self;

    fn pi() -> Self;

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Numerical value as a binary64 complex number.
    fn to_c64(&self) -> Complex64;

    /// Value in double-double precision, for the sampling oracle.
    fn to_cdd(&self) -> crate::dd::Cdd {
        self.to_c64().into()
    }

    /// `exp(self)` when it is known in this backend without a declaration.
    fn exp_builtin(&self) -> Option<Self>;

    /// Principal logarithm when it is known in this backend.
    fn ln_builtin(&self) -> Option<Self>;

    /// Principal square root when it is representable.
    fn sqrt_builtin(&self) -> Option<Self>;

    /// Converts a binary64 value into this backend. The exact backend snaps
    /// to the nearest Gaussian rational with denominator at most `max_den`
    /// and returns `None` if that is further than `tol` away.
    fn from_c64_snapped(value: Complex64, max_den: u64, tol: f64) -> Option<Self>;

    fn to_value(&self) -> ScalarValue;

    fn from_value(value: &ScalarValue) -> Result<Self, ScalarError>;

    /// Key for the canonical (re, im) ordering of frequencies.
    fn sort_key(&self) -> (f64, f64) {
        let c = self.to_c64();
        (c.re, c.im)
    }
}

#[cfg(test)]
mod tests;
