//! Exponential polynomials `Σ Pⱼ(z)·exp(μⱼ z)` in canonical form.
//!
//! Canonical means: pairwise distinct frequencies, no zero polynomials,
//! terms sorted by `(re μ, im μ)`. Since functions `exp(μ z)` with distinct
//! `μ` are linearly independent over the polynomials, a canonical value is
//! the zero function exactly when its term list is empty.

mod context;
mod doc;
mod poly;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{KernelError, Result};
use crate::scalar::{Scalar, Tolerance};

pub use context::{Context, ExpTable};
#[allow(unused_imports)]
pub(crate) use context::describe;
pub use doc::{ExpPolyDoc, ExpTermDoc};
pub use poly::Poly;

/// Largest `Re(μ z)` accepted by [`ExpPoly::eval`].
pub const EXP_OVERFLOW_LIMIT: f64 = 700.0;

/// One summand `P(z)·exp(freq·z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm<S> {
    pub poly: Poly<S>,
    pub freq: S,
}

impl<S: Scalar> ExpTerm<S> {
    pub fn new(poly: Poly<S>, freq: S) -> Self {
        ExpTerm { poly, freq }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpPoly<S> {
    terms: Vec<ExpTerm<S>>,
}

impl<S: Scalar> ExpPoly<S> {
    /// Canonicalizes an arbitrary term list.
    pub fn normalize(terms: Vec<ExpTerm<S>>, tol: &Tolerance) -> Self {
        let mut merged: Vec<ExpTerm<S>> = Vec::with_capacity(terms.len());
        for term in terms {
            let poly = term.poly.clean(tol.zero);
            if poly.is_zero() {
                continue;
            }
            match merged
                .iter_mut()
                .find(|t| t.freq.approx_eq(&term.freq, tol.merge))
            {
                Some(t) => t.poly = t.poly.add(&poly, tol.zero),
                None => merged.push(ExpTerm::new(poly, term.freq)),
            }
        }
        merged.retain(|t| !t.poly.is_zero());
        let mut keyed: Vec<((f64, f64), ExpTerm<S>)> =
            merged.into_iter().map(|t| (t.freq.sort_key(), t)).collect();
        keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        ExpPoly {
            terms: keyed.into_iter().map(|(_, t)| t).collect(),
        }
    }

    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        ExpPoly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        ExpPoly::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        ExpPoly::term(p, S::zero())
    }

    /// `coef · exp(freq·z)`.
    pub fn exponential(coef: S, freq: S) -> Self {
        ExpPoly::term(Poly::constant(coef), freq)
    }

    pub fn term(poly: Poly<S>, freq: S) -> Self {
        ExpPoly::normalize(vec![ExpTerm::new(poly, freq)], &Tolerance::new(0.0, 0.0))
    }

    pub fn terms(&self) -> &[ExpTerm<S>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<ExpTerm<S>> {
        self.terms
    }

    /// The zero test: canonical form has no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = &S> {
        self.terms.iter().map(|t| &t.freq)
    }

    /// Coefficient polynomial at `freq`, zero if absent.
    pub fn poly_at(&self, freq: &S, tol: f64) -> Poly<S> {
        self.terms
            .iter()
            .find(|t| t.freq.approx_eq(freq, tol))
            .map(|t| t.poly.clone())
            .unwrap_or_else(Poly::zero)
    }

    /// Re-canonicalizes under other tolerances.
    pub fn renormalize(self, tol: &Tolerance) -> Self {
        ExpPoly::normalize(self.terms, tol)
    }

    pub fn add_with(&self, other: &ExpPoly<S>, tol: &Tolerance) -> ExpPoly<S> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ExpPoly::normalize(terms, tol)
    }

    pub fn sub_with(&self, other: &ExpPoly<S>, tol: &Tolerance) -> ExpPoly<S> {
        self.add_with(&other.neg_ref(), tol)
    }

    fn neg_ref(&self) -> ExpPoly<S> {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm::new(t.poly.neg(), t.freq.clone()))
                .collect(),
        }
    }

    pub fn mul_with(&self, other: &ExpPoly<S>, tol: &Tolerance) -> ExpPoly<S> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(ExpTerm::new(
                    a.poly.mul(&b.poly, tol.zero),
                    a.freq.clone() + b.freq.clone(),
                ));
            }
        }
        ExpPoly::normalize(terms, tol)
    }

    pub fn scale_with(&self, s: &S, tol: &Tolerance) -> ExpPoly<S> {
        let terms = self
            .terms
            .iter()
            .map(|t| ExpTerm::new(t.poly.scale(s, tol.zero), t.freq.clone()))
            .collect();
        ExpPoly::normalize(terms, tol)
    }

    pub fn mul_poly_with(&self, p: &Poly<S>, tol: &Tolerance) -> ExpPoly<S> {
        let terms = self
            .terms
            .iter()
            .map(|t| ExpTerm::new(t.poly.mul(p, tol.zero), t.freq.clone()))
            .collect();
        ExpPoly::normalize(terms, tol)
    }

    /// `self^n` by repeated squaring, canonical after every product.
    pub fn pow_with(&self, n: u32, tol: &Tolerance) -> ExpPoly<S> {
        let mut acc = ExpPoly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_with(&base, tol);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_with(&base, tol);
            }
        }
        acc
    }

    /// k-th derivative. One step maps `(P, μ)` to `(P' + μP, μ)`.
    pub fn derive_with(&self, k: u32, tol: &Tolerance) -> ExpPoly<S> {
        let mut cur = self.clone();
        for _ in 0..k {
            let terms = cur
                .terms
                .iter()
                .map(|t| {
                    ExpTerm::new(
                        t.poly.derive().add(&t.poly.scale(&t.freq, tol.zero), tol.zero),
                        t.freq.clone(),
                    )
                })
                .collect();
            cur = ExpPoly::normalize(terms, tol);
        }
        cur
    }

    pub fn derive(&self, k: u32) -> ExpPoly<S> {
        self.derive_with(k, &Tolerance::default())
    }

    /// `f(z + c)`: each term maps to `(exp(μc)·P(z + c), μ)`.
    pub fn shift(&self, c: &S, ctx: &Context<S>) -> Result<ExpPoly<S>> {
        self.shift_by_multiple(c, 1, ctx)
    }

    /// `f(z + j·c)` using `exp(μ·j·c) = exp(μc)^j`, so only `exp(μc)` has to
    /// be known.
    pub fn shift_by_multiple(&self, c: &S, j: u32, ctx: &Context<S>) -> Result<ExpPoly<S>> {
        if j == 0 {
            return Ok(self.clone());
        }
        let offset = c.clone() * S::from_i64(j as i64);
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let factor = if t.freq.is_zero() {
                S::one()
            } else {
                ctx.exp(&(t.freq.clone() * c.clone()))?.pow(j)
            };
            let poly = t.poly.shift(&offset, ctx.tol.zero).scale(&factor, ctx.tol.zero);
            terms.push(ExpTerm::new(poly, t.freq.clone()));
        }
        Ok(ExpPoly::normalize(terms, &ctx.tol))
    }

    /// Direct evaluation `Σ Pⱼ(z)·exp(μⱼ z)` in binary64.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let arg = t.freq.to_c64() * z;
            if arg.re > EXP_OVERFLOW_LIMIT {
                return Err(KernelError::Overflow {
                    magnitude: arg.re,
                });
            }
            acc += t.poly.eval_c64(z) * arg.exp();
        }
        Ok(acc)
    }

    /// Growth order: 0 for polynomials (all frequencies zero), else 1.
    pub fn growth_order(&self) -> u32 {
        if self.terms.iter().all(|t| t.freq.is_zero_within(0.0)) {
            0
        } else {
            1
        }
    }

    /// The same function in binary64.
    pub fn to_c64(&self) -> ExpPoly<Complex64> {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm::new(t.poly.to_c64(), t.freq.to_c64()))
                .collect(),
        }
    }

    /// Largest polynomial degree among the terms.
    pub fn max_degree(&self) -> usize {
        self.terms
            .iter()
            .filter_map(|t| t.poly.degree())
            .max()
            .unwrap_or(0)
    }
}

impl<S: Scalar> Add for &ExpPoly<S> {
    type Output = ExpPoly<S>;

    fn add(self, rhs: &ExpPoly<S>) -> ExpPoly<S> {
        self.add_with(rhs, &Tolerance::default())
    }
}

impl<S: Scalar> Sub for &ExpPoly<S> {
    type Output = ExpPoly<S>;

    fn sub(self, rhs: &ExpPoly<S>) -> ExpPoly<S> {
        self.sub_with(rhs, &Tolerance::default())
    }
}

impl<S: Scalar> Mul for &ExpPoly<S> {
    type Output = ExpPoly<S>;

    fn mul(self, rhs: &ExpPoly<S>) -> ExpPoly<S> {
        self.mul_with(rhs, &Tolerance::default())
    }
}

impl<S: Scalar> Neg for &ExpPoly<S> {
    type Output = ExpPoly<S>;

    fn neg(self) -> ExpPoly<S> {
        self.neg_ref()
    }
}
