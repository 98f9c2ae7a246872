//! Checks candidate solutions of Fermat-type and nonlinear shift equations,
//! symbolically through the canonical residual and numerically at sample
//! points.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::dd::Cdd;
use crate::error::{KernelError, Result};
use crate::exppoly::{Context, ExpPoly};
use crate::operators::{eval_derivative_dd, OperatorKind, OperatorSpec};
use crate::scalar::Scalar;

/// Radius of the sampling disk.
pub const SAMPLE_RADIUS: f64 = 3.0;
/// Default number of sample points.
pub const SAMPLE_COUNT: usize = 32;
/// Sample residual below which a candidate counts as a numeric pass.
pub const SAMPLE_TOL: f64 = 1e-8;

/// `f² + (op f)² = rhs` with `rhs ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FermatEquation<S> {
    op: OperatorSpec<S>,
    rhs: ExpPoly<S>,
}

impl<S: Scalar> FermatEquation<S> {
    pub fn new(op: OperatorSpec<S>, rhs: ExpPoly<S>) -> Result<Self> {
        if rhs.is_zero() {
            return Err(KernelError::InvalidEquation(
                "the right-hand side must be nonzero".into(),
            ));
        }
        Ok(FermatEquation { op, rhs })
    }

    pub fn op(&self) -> &OperatorSpec<S> {
        &self.op
    }

    pub fn rhs(&self) -> &ExpPoly<S> {
        &self.rhs
    }

    /// `(f + i·g)(f − i·g) − rhs` with `g = op f`.
    pub fn factorized_residual(&self, f: &ExpPoly<S>, ctx: &Context<S>) -> Result<ExpPoly<S>> {
        let tol = &ctx.tol;
        let ig = self.op.apply(f, ctx)?.scale_with(&S::imag_unit(), tol);
        let plus = f.add_with(&ig, tol);
        let minus = f.sub_with(&ig, tol);
        Ok(plus.mul_with(&minus, tol).sub_with(&self.rhs, tol))
    }
}

/// `lhs_factor·fᵐ + q·(L f)ⁿ = p` with `L` a linear shift.
///
/// `lhs_factor` defaults to 1; a polynomial factor there lets an equation
/// with a rational coefficient be stated after clearing its denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct NonlinearShiftEquation<S> {
    m: u32,
    n: u32,
    q: ExpPoly<S>,
    p: ExpPoly<S>,
    l: OperatorSpec<S>,
    lhs_factor: ExpPoly<S>,
}

impl<S: Scalar> NonlinearShiftEquation<S> {
    pub fn new(m: u32, n: u32, q: ExpPoly<S>, p: ExpPoly<S>, l: OperatorSpec<S>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(KernelError::InvalidEquation("m and n must be at least 1".into()));
        }
        if q.is_zero() {
            return Err(KernelError::InvalidEquation("q must be nonzero".into()));
        }
        if !matches!(l.kind(), OperatorKind::LinearShift { .. }) {
            return Err(KernelError::InvalidEquation(format!(
                "the operator must be a linear shift, got {}",
                l.name()
            )));
        }
        Ok(NonlinearShiftEquation {
            m,
            n,
            q,
            p,
            l,
            lhs_factor: ExpPoly::one(),
        })
    }

    pub fn with_lhs_factor(mut self, factor: ExpPoly<S>) -> Result<Self> {
        if factor.is_zero() {
            return Err(KernelError::InvalidEquation("lhs_factor must be nonzero".into()));
        }
        self.lhs_factor = factor;
        Ok(self)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> &ExpPoly<S> {
        &self.q
    }

    pub fn p(&self) -> &ExpPoly<S> {
        &self.p
    }

    pub fn op(&self) -> &OperatorSpec<S> {
        &self.l
    }

    pub fn lhs_factor(&self) -> &ExpPoly<S> {
        &self.lhs_factor
    }

    pub fn tau(&self) -> usize {
        self.l.tau().unwrap_or(1)
    }

    /// The same equation over binary64 scalars.
    pub fn to_c64(&self) -> NonlinearShiftEquation<Complex64> {
        NonlinearShiftEquation {
            m: self.m,
            n: self.n,
            q: self.q.to_c64(),
            p: self.p.to_c64(),
            l: self.l.to_c64(),
            lhs_factor: self.lhs_factor.to_c64(),
        }
    }
}

/// An equation in one unknown exponential polynomial `f`.
pub trait Equation<S: Scalar> {
    /// Canonical residual; zero exactly when `f` solves the equation.
    fn residual(&self, f: &ExpPoly<S>, ctx: &Context<S>) -> Result<ExpPoly<S>>;

    /// Residual at one point, computed from values of `f` and its
    /// derivatives without the exponential table.
    fn eval_residual(&self, f: &ExpPoly<S>, z: Cdd) -> Result<Cdd>;
}

impl<S: Scalar> Equation<S> for FermatEquation<S> {
    fn residual(&self, f: &ExpPoly<S>, ctx: &Context<S>) -> Result<ExpPoly<S>> {
        let tol = &ctx.tol;
        let g = self.op.apply(f, ctx)?;
        let sum = f.mul_with(f, tol).add_with(&g.mul_with(&g, tol), tol);
        Ok(sum.sub_with(&self.rhs, tol))
    }

    fn eval_residual(&self, f: &ExpPoly<S>, z: Cdd) -> Result<Cdd> {
        let fz = eval_derivative_dd(f, 0, z)?;
        let gz = self.op.eval_at_dd(f, z)?;
        Ok(fz * fz + gz * gz - eval_derivative_dd(&self.rhs, 0, z)?)
    }
}

impl<S: Scalar> Equation<S> for NonlinearShiftEquation<S> {
    fn residual(&self, f: &ExpPoly<S>, ctx: &Context<S>) -> Result<ExpPoly<S>> {
        let tol = &ctx.tol;
        let lf = self.l.apply(f, ctx)?;
        let left = self.lhs_factor.mul_with(&f.pow_with(self.m, tol), tol);
        let right = self.q.mul_with(&lf.pow_with(self.n, tol), tol);
        Ok(left.add_with(&right, tol).sub_with(&self.p, tol))
    }

    fn eval_residual(&self, f: &ExpPoly<S>, z: Cdd) -> Result<Cdd> {
        let fz = eval_derivative_dd(f, 0, z)?;
        let lz = self.l.eval_at_dd(f, z)?;
        let d = eval_derivative_dd(&self.lhs_factor, 0, z)?;
        let q = eval_derivative_dd(&self.q, 0, z)?;
        let p = eval_derivative_dd(&self.p, 0, z)?;
        Ok(d * fz.powu(self.m) + q * lz.powu(self.n) - p)
    }
}

/// Outcome of a verification.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport<S> {
    pub residual: ExpPoly<S>,
    pub symbolic_pass: bool,
    pub sample_max_abs: f64,
    pub sample_points: Vec<Complex64>,
    pub growth_order: u32,
}

impl<S> VerificationReport<S> {
    /// Both the symbolic and the numeric check passed.
    pub fn passed(&self) -> bool {
        self.symbolic_pass && self.sample_max_abs < SAMPLE_TOL
    }
}

impl<S: Scalar> Serialize for VerificationReport<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> std::result::Result<Se::Ok, Se::Error> {
        #[derive(Serialize)]
        #[serde(bound = "")]
        struct Doc<'a, S: Scalar> {
            symbolic_pass: bool,
            residual: &'a ExpPoly<S>,
            sample_max_abs: f64,
            sample_points: Vec<[f64; 2]>,
            growth_order: u32,
        }
        Doc {
            symbolic_pass: self.symbolic_pass,
            residual: &self.residual,
            sample_max_abs: self.sample_max_abs,
            sample_points: self.sample_points.iter().map(|z| [z.re, z.im]).collect(),
            growth_order: self.growth_order,
        }
        .serialize(serializer)
    }
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut x = 0.0;
    while i > 0 {
        x += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    x
}

/// `n` points of the (2, 3) Halton sequence mapped onto the disk
/// `|z| ≤ radius` with uniform area density.
pub fn halton_disk(n: usize, radius: f64) -> Vec<Complex64> {
    (1..=n)
        .map(|i| {
            let r = radius * radical_inverse(i, 2).sqrt();
            let theta = std::f64::consts::TAU * radical_inverse(i, 3);
            Complex64::from_polar(r, theta)
        })
        .collect()
}

pub fn default_sample_points() -> Vec<Complex64> {
    halton_disk(SAMPLE_COUNT, SAMPLE_RADIUS)
}

/// `max |residual(zᵢ)|` over `points`, or over the default points.
pub fn sample_residual<S: Scalar, E: Equation<S>>(
    f: &ExpPoly<S>,
    eq: &E,
    points: Option<&[Complex64]>,
) -> Result<f64> {
    let default;
    let points = match points {
        Some(p) => p,
        None => {
            default = default_sample_points();
            &default
        }
    };
    let mut worst: f64 = 0.0;
    for z in points {
        let r = eq.eval_residual(f, (*z).into())?.norm();
        if !r.is_finite() {
            return Err(KernelError::Overflow { magnitude: r });
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Canonical residual plus sampled residual.
pub fn verify<S: Scalar, E: Equation<S>>(
    f: &ExpPoly<S>,
    eq: &E,
    ctx: &Context<S>,
) -> Result<VerificationReport<S>> {
    let residual = eq.residual(f, ctx)?;
    let sample_points = default_sample_points();
    let sample_max_abs = sample_residual(f, eq, Some(&sample_points))?;
    Ok(VerificationReport {
        symbolic_pass: residual.is_zero(),
        residual,
        sample_max_abs,
        sample_points,
        growth_order: f.growth_order(),
    })
}

/// Residual `f² + (op f)² − Q`.
pub fn verify_fermat<S: Scalar>(
    f: &ExpPoly<S>,
    eq: &FermatEquation<S>,
    ctx: &Context<S>,
) -> Result<VerificationReport<S>> {
    verify(f, eq, ctx)
}

/// Zero test of the factorized form `(f + i·g)(f − i·g) − Q`.
pub fn verify_factorized<S: Scalar>(
    f: &ExpPoly<S>,
    eq: &FermatEquation<S>,
    ctx: &Context<S>,
) -> Result<bool> {
    Ok(eq.factorized_residual(f, ctx)?.is_zero())
}

/// Residual `lhs_factor·fᵐ + q·(L f)ⁿ − p`.
pub fn verify_nonlinear<S: Scalar>(
    f: &ExpPoly<S>,
    eq: &NonlinearShiftEquation<S>,
    ctx: &Context<S>,
) -> Result<VerificationReport<S>> {
    verify(f, eq, ctx)
}
