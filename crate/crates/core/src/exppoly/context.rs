use crate::error::{KernelError, Result};
use crate::scalar::{Scalar, Tolerance};

/// Values of `exp(x)` the caller asserts, for exponents the backend cannot
/// exponentiate on its own (e.g. `exp(a·c) = 1` for symbolic `a`, `c`).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTable<S> {
    entries: Vec<(S, S)>,
}

impl<S> Default for ExpTable<S> {
    fn default() -> Self {
        ExpTable {
            entries: Vec::new(),
        }
    }
}

impl<S: Scalar> ExpTable<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[(S, S)] {
        &self.entries
    }

    /// Registers `exp(exponent) = value`.
    ///
    /// Re-declaring with the same value is a no-op. A different value, or a
    /// value contradicting what the backend computes itself, is an error.
    pub fn declare(&mut self, exponent: S, value: S, tol: &Tolerance) -> Result<()> {
        if let Some((_, existing)) = self
            .entries
            .iter()
            .find(|(k, _)| k.approx_eq(&exponent, tol.merge))
        {
            if existing.approx_eq(&value, tol.zero) {
                return Ok(());
            }
            return Err(KernelError::DuplicateExponential {
                exponent: format!("{:?}", exponent.to_c64()),
                first: format!("{:?}", existing.to_c64()),
                second: format!("{:?}", value.to_c64()),
            });
        }
        if let Some(known) = exponent.exp_builtin() {
            let scale = known.to_c64().norm().max(1.0);
            if !known.approx_eq(&value, tol.zero * scale) {
                return Err(KernelError::InconsistentExponential {
                    exponent: format!("{:?}", exponent.to_c64()),
                    declared: format!("{:?}", value.to_c64()),
                    known: format!("{:?}", known.to_c64()),
                });
            }
        }
        self.entries.push((exponent, value));
        Ok(())
    }

    fn lookup(&self, exponent: &S, tol: f64) -> Option<&S> {
        self.entries
            .iter()
            .find(|(k, _)| k.approx_eq(exponent, tol))
            .map(|(_, v)| v)
    }
}

/// Per-computation settings: tolerances and declared exponentials.
#[derive(Clone, Debug, PartialEq)]
pub struct Context<S> {
    pub tol: Tolerance,
    pub exps: ExpTable<S>,
}

impl<S> Default for Context<S> {
    fn default() -> Self {
        Context {
            tol: Tolerance::default(),
            exps: ExpTable::default(),
        }
    }
}

impl<S: Scalar> Context<S> {
    pub fn new(tol: Tolerance) -> Self {
        Context {
            tol,
            exps: ExpTable::new(),
        }
    }

    pub fn with_exp(mut self, exponent: S, value: S) -> Result<Self> {
        let tol = self.tol;
        self.exps.declare(exponent, value, &tol)?;
        Ok(self)
    }

    pub fn declare(&mut self, exponent: S, value: S) -> Result<()> {
        let tol = self.tol;
        self.exps.declare(exponent, value, &tol)
    }

    /// `exp(x)`: a declared value if present (or the inverse of a declared
    /// `exp(-x)`), else the backend's own.
    pub fn exp(&self, x: &S) -> Result<S> {
        if let Some(v) = self.exps.lookup(x, self.tol.merge) {
            return Ok(v.clone());
        }
        if let Some(v) = self.exps.lookup(&-x.clone(), self.tol.merge) {
            if let Some(inv) = v.checked_inv(self.tol.zero) {
                return Ok(inv);
            }
        }
        x.exp_builtin().ok_or_else(|| KernelError::NonExactExponential {
            exponent: describe(x),
        })
    }
}

pub(crate) fn describe<S: Scalar>(x: &S) -> String {
    match x.to_value() {
        crate::scalar::ScalarValue::Exact(e) => e.to_string(),
        crate::scalar::ScalarValue::Float(c) => c.to_string(),
    }
}
