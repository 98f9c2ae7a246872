//! The four operator families acting on exponential polynomials:
//!
//! * linear shift `Σ aⱼ f(z + jc)`
//! * difference `P(z)(f(z + c) − f(z))`
//! * delay-differential delta `R(z)(f⁽ᵏ⁾(z + c) − f⁽ᵏ⁾(z))`
//! * mixed delay `R(z)(A f⁽ᵐ⁾(z + c) + B f⁽ⁿ⁾(z))`, where `m` or `n` may be 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::Cdd;
use crate::error::{KernelError, Result};
use crate::exppoly::{Context, ExpPoly, Poly};
use crate::scalar::{Scalar, ScalarDoc, ScalarError, Tolerance};

/// An operator whose invariants have been checked. Build it through the
/// constructors; there is no way to hold an invalid one.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec<S> {
    kind: OperatorKind<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorKind<S> {
    LinearShift {
        c: S,
        coeffs: Vec<S>,
    },
    Difference {
        c: S,
        p: Poly<S>,
    },
    DiffDelta {
        k: u32,
        c: S,
        r: Poly<S>,
    },
    MixedDelay {
        m: u32,
        n: u32,
        c: S,
        a: S,
        b: S,
        r: Poly<S>,
    },
}

fn invalid(msg: impl Into<String>) -> KernelError {
    KernelError::InvalidOperator(msg.into())
}

fn nonzero<S: Scalar>(x: &S, what: &str, tol: f64) -> Result<()> {
    if x.is_zero_within(tol) {
        return Err(invalid(format!("{what} must be nonzero")));
    }
    Ok(())
}

impl<S: Scalar> OperatorKind<S> {
    fn check(&self, tol: f64) -> Result<()> {
        match self {
            OperatorKind::LinearShift { c, coeffs } => {
                nonzero(c, "c", tol)?;
                if coeffs.len() < 2 {
                    return Err(invalid("linear shift needs coefficients a_0..a_tau with tau >= 1"));
                }
                nonzero(coeffs.last().unwrap(), "leading coefficient a_tau", tol)
            }
            OperatorKind::Difference { c, p } => {
                nonzero(c, "c", tol)?;
                if p.clean_ref(tol).is_zero() {
                    return Err(invalid("P must be a nonzero polynomial"));
                }
                Ok(())
            }
            OperatorKind::DiffDelta { k, c, r } => {
                if *k == 0 {
                    return Err(invalid("k must be at least 1"));
                }
                nonzero(c, "c", tol)?;
                if r.clean_ref(tol).is_zero() {
                    return Err(invalid("R must be a nonzero polynomial"));
                }
                Ok(())
            }
            OperatorKind::MixedDelay { c, a, b, r, .. } => {
                nonzero(c, "c", tol)?;
                nonzero(a, "A", tol)?;
                nonzero(b, "B", tol)?;
                if r.clean_ref(tol).is_zero() {
                    return Err(invalid("R must be a nonzero polynomial"));
                }
                Ok(())
            }
        }
    }
}

impl<S: Scalar> Poly<S> {
    fn clean_ref(&self, tol: f64) -> Poly<S> {
        self.clone().clean(tol)
    }
}

impl<S: Scalar> OperatorSpec<S> {
    /// Validates `kind` with a strict zero test.
    pub fn new(kind: OperatorKind<S>) -> Result<Self> {
        Self::new_with(kind, &Tolerance::new(0.0, 0.0))
    }

    pub fn new_with(kind: OperatorKind<S>, tol: &Tolerance) -> Result<Self> {
        kind.check(tol.zero)?;
        Ok(OperatorSpec { kind })
    }

    pub fn linear_shift(c: S, coeffs: Vec<S>) -> Result<Self> {
        Self::new(OperatorKind::LinearShift { c, coeffs })
    }

    /// `f(z + c) − f(z)`.
    pub fn delta(c: S) -> Result<Self> {
        Self::linear_shift(c, vec![-S::one(), S::one()])
    }

    pub fn difference(c: S, p: Poly<S>) -> Result<Self> {
        Self::new(OperatorKind::Difference { c, p })
    }

    pub fn diff_delta(k: u32, c: S, r: Poly<S>) -> Result<Self> {
        Self::new(OperatorKind::DiffDelta { k, c, r })
    }

    pub fn mixed_delay(m: u32, n: u32, c: S, a: S, b: S, r: Poly<S>) -> Result<Self> {
        Self::new(OperatorKind::MixedDelay { m, n, c, a, b, r })
    }

    pub fn kind(&self) -> &OperatorKind<S> {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            OperatorKind::LinearShift { .. } => "linear_shift",
            OperatorKind::Difference { .. } => "difference",
            OperatorKind::DiffDelta { .. } => "diff_delta",
            OperatorKind::MixedDelay { .. } => "mixed_delay",
        }
    }

    pub fn shift(&self) -> &S {
        match &self.kind {
            OperatorKind::LinearShift { c, .. }
            | OperatorKind::Difference { c, .. }
            | OperatorKind::DiffDelta { c, .. }
            | OperatorKind::MixedDelay { c, .. } => c,
        }
    }

    /// `τ` for a linear shift, else `None`.
    pub fn tau(&self) -> Option<usize> {
        match &self.kind {
            OperatorKind::LinearShift { coeffs, .. } => Some(coeffs.len() - 1),
            _ => None,
        }
    }

    /// Applies the operator, returning a canonical exponential polynomial.
    pub fn apply(&self, f: &ExpPoly<S>, ctx: &Context<S>) -> Result<ExpPoly<S>> {
        let tol = &ctx.tol;
        self.kind.check(tol.zero)?;
        match &self.kind {
            OperatorKind::LinearShift { c, coeffs } => {
                let mut acc = ExpPoly::zero();
                for (j, a) in coeffs.iter().enumerate() {
                    if a.is_zero_within(tol.zero) {
                        continue;
                    }
                    let shifted = f.shift_by_multiple(c, j as u32, ctx)?;
                    acc = acc.add_with(&shifted.scale_with(a, tol), tol);
                }
                Ok(acc)
            }
            OperatorKind::Difference { c, p } => Ok(delta_c(f, c, ctx)?.mul_poly_with(p, tol)),
            OperatorKind::DiffDelta { k, c, r } => {
                let d = f.derive_with(*k, tol);
                Ok(delta_c(&d, c, ctx)?.mul_poly_with(r, tol))
            }
            OperatorKind::MixedDelay { m, n, c, a, b, r } => {
                let shifted = f.derive_with(*m, tol).shift(c, ctx)?.scale_with(a, tol);
                let direct = f.derive_with(*n, tol).scale_with(b, tol);
                Ok(shifted.add_with(&direct, tol).mul_poly_with(r, tol))
            }
        }
    }

    /// `(op f)(z)` evaluated pointwise from derivatives of `f` at the
    /// shifted points. Independent of the exponential table, so it serves as
    /// a numeric oracle for [`OperatorSpec::apply`].
    pub fn eval_at(&self, f: &ExpPoly<S>, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_at_dd(f, z.into())?.to_c64())
    }

    pub fn eval_at_dd(&self, f: &ExpPoly<S>, z: Cdd) -> Result<Cdd> {
        match &self.kind {
            OperatorKind::LinearShift { c, coeffs } => {
                let c = c.to_cdd();
                let mut acc = Cdd::ZERO;
                let mut w = z;
                for a in coeffs {
                    acc = acc + a.to_cdd() * eval_derivative_dd(f, 0, w)?;
                    w = w + c;
                }
                Ok(acc)
            }
            OperatorKind::Difference { c, p } => {
                let d = eval_derivative_dd(f, 0, z + c.to_cdd())? - eval_derivative_dd(f, 0, z)?;
                Ok(eval_poly_dd(p, z) * d)
            }
            OperatorKind::DiffDelta { k, c, r } => {
                let d = eval_derivative_dd(f, *k, z + c.to_cdd())? - eval_derivative_dd(f, *k, z)?;
                Ok(eval_poly_dd(r, z) * d)
            }
            OperatorKind::MixedDelay { m, n, c, a, b, r } => {
                let v = a.to_cdd() * eval_derivative_dd(f, *m, z + c.to_cdd())?
                    + b.to_cdd() * eval_derivative_dd(f, *n, z)?;
                Ok(eval_poly_dd(r, z) * v)
            }
        }
    }

    /// The same operator over binary64 scalars.
    pub fn to_c64(&self) -> OperatorSpec<Complex64> {
        let kind = match &self.kind {
            OperatorKind::LinearShift { c, coeffs } => OperatorKind::LinearShift {
                c: c.to_c64(),
                coeffs: coeffs.iter().map(Scalar::to_c64).collect(),
            },
            OperatorKind::Difference { c, p } => OperatorKind::Difference {
                c: c.to_c64(),
                p: p.to_c64(),
            },
            OperatorKind::DiffDelta { k, c, r } => OperatorKind::DiffDelta {
                k: *k,
                c: c.to_c64(),
                r: r.to_c64(),
            },
            OperatorKind::MixedDelay { m, n, c, a, b, r } => OperatorKind::MixedDelay {
                m: *m,
                n: *n,
                c: c.to_c64(),
                a: a.to_c64(),
                b: b.to_c64(),
                r: r.to_c64(),
            },
        };
        OperatorSpec { kind }
    }
}

/// `f(z + c) − f(z)`.
pub fn delta_c<S: Scalar>(f: &ExpPoly<S>, c: &S, ctx: &Context<S>) -> Result<ExpPoly<S>> {
    Ok(f.shift(c, ctx)?.sub_with(f, &ctx.tol))
}

pub fn eval_poly_dd<S: Scalar>(p: &Poly<S>, z: Cdd) -> Cdd {
    p.coeffs()
        .iter()
        .rev()
        .fold(Cdd::ZERO, |acc, c| acc * z + c.to_cdd())
}

/// `f⁽ᵏ⁾(w)` via `Σ exp(μw) Σₗ C(k,l) μ^(k−l) P⁽ˡ⁾(w)`.
pub fn eval_derivative<S: Scalar>(f: &ExpPoly<S>, k: u32, w: Complex64) -> Result<Complex64> {
    Ok(eval_derivative_dd(f, k, w.into())?.to_c64())
}

pub fn eval_derivative_dd<S: Scalar>(f: &ExpPoly<S>, k: u32, w: Cdd) -> Result<Cdd> {
    let mut acc = Cdd::ZERO;
    for t in f.terms() {
        let mu = t.freq.to_cdd();
        let arg = mu * w;
        if arg.re.hi > crate::exppoly::EXP_OVERFLOW_LIMIT {
            return Err(KernelError::Overflow { magnitude: arg.re.hi });
        }
        let mut inner = Cdd::ZERO;
        let mut binom = 1.0;
        let mut dp = t.poly.clone();
        for l in 0..=k {
            if dp.is_zero() {
                break;
            }
            inner = inner + (mu.powu(k - l) * eval_poly_dd(&dp, w)).scale(binom);
            binom = binom * (k - l) as f64 / (l + 1) as f64;
            dp = dp.derive();
        }
        acc = acc + inner * arg.exp();
    }
    Ok(acc)
}

/// Wire form of a polynomial: ascending coefficients.
pub type PolyDoc = Vec<ScalarDoc>;

pub(crate) fn poly_from_doc<S: Scalar>(doc: &[ScalarDoc], tol: f64) -> Result<Poly<S>, ScalarError> {
    let coeffs = doc
        .iter()
        .map(ScalarDoc::to_scalar::<S>)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::from_coeffs(coeffs, tol))
}

pub(crate) fn poly_to_doc<S: Scalar>(p: &Poly<S>) -> PolyDoc {
    p.coeffs().iter().map(ScalarDoc::from_scalar).collect()
}

fn one_poly() -> PolyDoc {
    vec![ScalarDoc::one()]
}

/// Wire form of an operator, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorDoc {
    LinearShift {
        c: ScalarDoc,
        coeffs: Vec<ScalarDoc>,
    },
    Difference {
        c: ScalarDoc,
        #[serde(default = "one_poly")]
        p: PolyDoc,
    },
    DiffDelta {
        k: u32,
        c: ScalarDoc,
        #[serde(default = "one_poly")]
        r: PolyDoc,
    },
    MixedDelay {
        m: u32,
        n: u32,
        c: ScalarDoc,
        #[serde(rename = "A")]
        a: ScalarDoc,
        #[serde(rename = "B")]
        b: ScalarDoc,
        #[serde(default = "one_poly")]
        r: PolyDoc,
    },
}

impl OperatorDoc {
    pub fn from_spec<S: Scalar>(op: &OperatorSpec<S>) -> Self {
        let d = ScalarDoc::from_scalar::<S>;
        match op.kind() {
            OperatorKind::LinearShift { c, coeffs } => OperatorDoc::LinearShift {
                c: d(c),
                coeffs: coeffs.iter().map(d).collect(),
            },
            OperatorKind::Difference { c, p } => OperatorDoc::Difference {
                c: d(c),
                p: poly_to_doc(p),
            },
            OperatorKind::DiffDelta { k, c, r } => OperatorDoc::DiffDelta {
                k: *k,
                c: d(c),
                r: poly_to_doc(r),
            },
            OperatorKind::MixedDelay { m, n, c, a, b, r } => OperatorDoc::MixedDelay {
                m: *m,
                n: *n,
                c: d(c),
                a: d(a),
                b: d(b),
                r: poly_to_doc(r),
            },
        }
    }

    pub fn to_spec<S: Scalar>(&self, tol: &Tolerance) -> Result<OperatorSpec<S>> {
        let s = |x: &ScalarDoc| x.to_scalar::<S>();
        let p = |x: &PolyDoc| poly_from_doc::<S>(x, tol.zero);
        let kind = match self {
            OperatorDoc::LinearShift { c, coeffs } => OperatorKind::LinearShift {
                c: s(c)?,
                coeffs: coeffs.iter().map(s).collect::<Result<Vec<_>, _>>()?,
            },
            OperatorDoc::Difference { c, p: poly } => OperatorKind::Difference {
                c: s(c)?,
                p: p(poly)?,
            },
            OperatorDoc::DiffDelta { k, c, r } => OperatorKind::DiffDelta {
                k: *k,
                c: s(c)?,
                r: p(r)?,
            },
            OperatorDoc::MixedDelay { m, n, c, a, b, r } => OperatorKind::MixedDelay {
                m: *m,
                n: *n,
                c: s(c)?,
                a: s(a)?,
                b: s(b)?,
                r: p(r)?,
            },
        };
        OperatorSpec::new_with(kind, tol)
    }
}

impl<S: Scalar> Serialize for OperatorSpec<S> {
    fn serialize<Se: serde::Serializer>(&self, serializer: Se) -> std::result::Result<Se::Ok, Se::Error> {
        OperatorDoc::from_spec(self).serialize(serializer)
    }
}
