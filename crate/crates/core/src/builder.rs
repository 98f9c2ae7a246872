//! Closed-form constructions of solutions `f = (Q1·e^{az+b} + Q2·e^{-(az+b)})/2`
//! for the Fermat-type equations `f² + (op f)² = Q`.
//!
//! Every builder assembles the family from the constraint relations, then
//! runs the verifier on it; a family is only returned if it verifies.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::error::KernelError;
use crate::exppoly::{Context, ExpPoly, ExpTerm, Poly};
use crate::linalg::{self, Solution};
use crate::operators::{poly_to_doc, OperatorSpec, PolyDoc};
use crate::scalar::{Scalar, ScalarDoc, Tolerance};
use crate::verifier::{verify_fermat, FermatEquation, VerificationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("k = {k} is even: no solution of this form exists unless e^(ac) = 1")]
    EvenK { k: u32 },
    #[error("Q1 is not divisible by P(Q1): {0}")]
    NonPolynomialQuotient(String),
    #[error("the assembled equation does not verify: {0}")]
    ConsistencyFailure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate parameters ({case}): {detail}")]
    DegenerateParameters { case: String, detail: String },
    #[error("e^(ac) = {value} lies in the excluded set {set}")]
    ExclusionViolated { set: String, value: String },
    #[error("infeasible [{rule}]: {detail}")]
    Infeasible { rule: &'static str, detail: String },
    #[error("the leading shift coefficient a_tau is zero")]
    LeadingCoefficientZero,
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("e^(ac) must be nonzero")]
    ZeroW,
    #[error("{0} has no exact value in this backend; use the float backend")]
    NotRepresentable(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type BuildResult<T> = std::result::Result<T, BuildError>;

fn describe<S: Scalar>(x: &S) -> String {
    crate::exppoly::describe(x)
}

/// Sign choice for the `±` in the closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign<S: Scalar>(self) -> S {
        match self {
            Branch::Plus => S::one(),
            Branch::Minus => -S::one(),
        }
    }
}

/// `f = (Q1·e^{az+b} + Q2·e^{-(az+b)})/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoshForm<S> {
    pub a: S,
    pub b: S,
    pub q1: Poly<S>,
    pub q2: Poly<S>,
}

impl<S: Scalar> CoshForm<S> {
    pub fn new(a: S, b: S, q1: Poly<S>, q2: Poly<S>, tol: &Tolerance) -> BuildResult<Self> {
        if a.is_zero_within(tol.zero) {
            return Err(BuildError::Precondition("a must be nonzero".into()));
        }
        if q1.clone().clean(tol.zero).is_zero() || q2.clone().clean(tol.zero).is_zero() {
            return Err(BuildError::Precondition("Q1 and Q2 must be nonzero".into()));
        }
        Ok(CoshForm { a, b, q1, q2 })
    }

    /// `cosh(az + b)`.
    pub fn cosh(a: S, b: S, tol: &Tolerance) -> BuildResult<Self> {
        Self::new(a, b, Poly::one(), Poly::one(), tol)
    }

    pub fn render(&self, ctx: &Context<S>) -> BuildResult<ExpPoly<S>> {
        let tol = &ctx.tol;
        let half = S::from_ratio(1, 2);
        let eb = ctx.exp(&self.b)? * half.clone();
        let emb = ctx.exp(&-self.b.clone())? * half;
        Ok(ExpPoly::normalize(
            vec![
                ExpTerm::new(self.q1.scale(&eb, tol.zero), self.a.clone()),
                ExpTerm::new(self.q2.scale(&emb, tol.zero), -self.a.clone()),
            ],
            tol,
        ))
    }
}

/// A relation between the parameters, stated as `residual = 0`.
///
/// Non-binding conditions are alternatives recorded for comparison; only
/// binding ones must hold.
#[derive(Clone, Debug, PartialEq)]
pub struct SideCondition<S> {
    pub name: String,
    pub residual: Poly<S>,
    pub binding: bool,
}

impl<S: Scalar> SideCondition<S> {
    fn scalar(name: &str, residual: S, binding: bool) -> Self {
        SideCondition {
            name: name.into(),
            residual: Poly::from_coeffs(vec![residual], 0.0),
            binding,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.residual.coeffs().iter().all(|c| c.is_zero_within(tol))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExclusionCheck {
    pub name: String,
    pub holds: bool,
    pub binding: bool,
}

impl ExclusionCheck {
    fn new(name: &str, holds: bool, binding: bool) -> Self {
        ExclusionCheck {
            name: name.into(),
            holds,
            binding,
        }
    }
}

/// A verified solution together with the relations it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFamily<S> {
    pub case: String,
    pub form: CoshForm<S>,
    pub f: ExpPoly<S>,
    pub op: OperatorSpec<S>,
    pub rhs: ExpPoly<S>,
    pub side_conditions: Vec<SideCondition<S>>,
    pub exclusions_checked: Vec<ExclusionCheck>,
    pub notes: Vec<String>,
    pub report: VerificationReport<S>,
}

impl<S: Scalar> SolutionFamily<S> {
    pub fn equation(&self) -> FermatEquation<S> {
        FermatEquation::new(self.op.clone(), self.rhs.clone()).expect("rhs is nonzero")
    }

    /// The constant `R` of the operator, when it has one.
    pub fn r(&self) -> Option<S> {
        use crate::operators::OperatorKind;
        let r = match self.op.kind() {
            OperatorKind::DiffDelta { r, .. } | OperatorKind::MixedDelay { r, .. } => r,
            _ => return None,
        };
        r.is_constant().then(|| r.coeff(0))
    }

    pub fn side_condition(&self, name: &str) -> Option<&SideCondition<S>> {
        self.side_conditions.iter().find(|s| s.name == name)
    }
}

#[allow(clippy::too_many_arguments)]
fn finish<S: Scalar>(
    case: &str,
    form: CoshForm<S>,
    op: OperatorSpec<S>,
    rhs: ExpPoly<S>,
    side_conditions: Vec<SideCondition<S>>,
    exclusions_checked: Vec<ExclusionCheck>,
    notes: Vec<String>,
    ctx: &Context<S>,
) -> BuildResult<SolutionFamily<S>> {
    let tol = ctx.tol.zero;
    for sc in &side_conditions {
        if sc.binding && !sc.holds(tol) {
            return Err(BuildError::SideConditionViolated(sc.name.clone()));
        }
    }
    let f = form.render(ctx)?;
    let eq = FermatEquation::new(op.clone(), rhs.clone())?;
    let report = verify_fermat(&f, &eq, ctx)?;
    if !report.passed() {
        return Err(BuildError::ConsistencyFailure(format!(
            "{case}: {} residual terms, sampled residual {:e}",
            report.residual.terms().len(),
            report.sample_max_abs
        )));
    }
    Ok(SolutionFamily {
        case: case.into(),
        form,
        f,
        op,
        rhs,
        side_conditions,
        exclusions_checked,
        notes,
        report,
    })
}

fn require_nonzero<S: Scalar>(x: &S, what: &str, tol: f64) -> BuildResult<()> {
    if x.is_zero_within(tol) {
        return Err(BuildError::Precondition(format!("{what} must be nonzero")));
    }
    Ok(())
}

fn div<S: Scalar>(x: S, y: &S, what: &str, tol: f64) -> BuildResult<S> {
    x.checked_div(y, tol)
        .ok_or_else(|| BuildError::Precondition(format!("{what} must be nonzero")))
}

/// `e^{ac} ≠ 1` with `Δ_c f^{(k)}`: `k` odd, `a = (2m+1)πi/c`, `R = i/(2a^k)`
/// and `Q = Q1·Q2` constant.
pub fn build_case_i<S: Scalar>(
    k: u32,
    c: S,
    branch_m: i64,
    q1: S,
    q2: S,
    b: S,
    ctx: &Context<S>,
) -> BuildResult<SolutionFamily<S>> {
    let tol = ctx.tol.zero;
    if k == 0 {
        return Err(BuildError::Precondition("k must be at least 1".into()));
    }
    if k.is_multiple_of(2) {
        return Err(BuildError::EvenK { k });
    }
    require_nonzero(&c, "c", tol)?;
    require_nonzero(&q1, "Q1", tol)?;
    require_nonzero(&q2, "Q2", tol)?;
    let odd = S::from_i64(2 * branch_m + 1);
    let a = div(odd * S::pi() * S::imag_unit(), &c, "c", tol)?;
    let ak = a.pow(k);
    let r = div(S::imag_unit(), &(S::from_i64(2) * ak.clone()), "a", tol)?;
    let w = ctx.exp(&(a.clone() * c.clone()))?;
    let sides = vec![
        SideCondition::scalar(
            "2iRa^k + 1 = 0",
            S::from_i64(2) * S::imag_unit() * r.clone() * ak + S::one(),
            true,
        ),
        SideCondition::scalar("e^(ac) = -1", w.clone() + S::one(), true),
    ];
    let exclusions = vec![ExclusionCheck::new(
        "e^(ac) != 1",
        !w.approx_eq(&S::one(), tol),
        true,
    )];
    let form = CoshForm::new(
        a,
        b,
        Poly::constant(q1.clone()),
        Poly::constant(q2.clone()),
        &ctx.tol,
    )?;
    let op = OperatorSpec::diff_delta(k, c, Poly::constant(r))?;
    let rhs = ExpPoly::constant(q1 * q2);
    finish("i", form, op, rhs, sides, exclusions, vec![], ctx)
}

fn binomial(k: u32, l: u32) -> i64 {
    num_integer::binomial(k as i64, l as i64)
}

/// `Σ_l C(k,l)·s^{k-l}·(x^{(l)}(z+c) − x^{(l)}(z))`.
fn shifted_derivative_sum<S: Scalar>(x: &Poly<S>, k: u32, s: &S, c: &S, tol: f64) -> Poly<S> {
    let mut acc = Poly::zero();
    for l in 0..=k {
        let d = x.derive_n(l as usize);
        let diff = d.shift(c, tol).sub(&d, tol);
        let coef = S::from_i64(binomial(k, l)) * s.pow(k - l);
        acc = acc.add(&diff.scale(&coef, tol), tol);
    }
    acc
}

/// `P(x) = i·Σ_l C(k,l)·a^{k-l}·(x^{(l)}(z+c) − x^{(l)}(z))`.
pub fn p_operator<S: Scalar>(x: &Poly<S>, k: u32, a: &S, c: &S, tol: f64) -> Poly<S> {
    shifted_derivative_sum(x, k, a, c, tol).scale(&S::imag_unit(), tol)
}

/// `e^{ac} = 1` with `Δ_c f^{(k)}`: `R = Q1/P(Q1)` of degree one and
/// `Q = Q1·Q2`. The Q2-side relations are recorded but the verifier decides.
pub fn build_case_ii<S: Scalar>(
    k: u32,
    a: S,
    c: S,
    q1: Poly<S>,
    q2: Poly<S>,
    b: S,
    ctx: &Context<S>,
) -> BuildResult<SolutionFamily<S>> {
    let tol = ctx.tol.zero;
    if k == 0 {
        return Err(BuildError::Precondition("k must be at least 1".into()));
    }
    require_nonzero(&a, "a", tol)?;
    require_nonzero(&c, "c", tol)?;
    let (q1, q2) = (q1.clean(tol), q2.clean(tol));
    if q1.degree().unwrap_or(0) == 0 || q2.degree().unwrap_or(0) == 0 {
        return Err(BuildError::Precondition(
            "Q1 and Q2 must both be non-constant polynomials".into(),
        ));
    }
    let w = ctx.exp(&(a.clone() * c.clone()))?;
    if !w.approx_eq(&S::one(), tol) {
        return Err(BuildError::Precondition(format!(
            "this case needs e^(ac) = 1, got {}",
            describe(&w)
        )));
    }
    let p1 = p_operator(&q1, k, &a, &c, tol);
    if p1.is_zero() {
        return Err(BuildError::NonPolynomialQuotient("P(Q1) vanishes".into()));
    }
    let (r, rem) = q1
        .div_rem(&p1, tol)
        .ok_or_else(|| BuildError::NonPolynomialQuotient("P(Q1) vanishes".into()))?;
    if !rem.is_zero() {
        return Err(BuildError::NonPolynomialQuotient(format!(
            "remainder of degree {}",
            rem.degree().unwrap_or(0)
        )));
    }

    let p2 = p_operator(&q2, k, &a, &c, tol);
    let rp2 = r.mul(&p2, tol);
    let neg = shifted_derivative_sum(&q2, k, &-a.clone(), &c, tol);
    let proof_lhs = r
        .mul(&neg, tol)
        .scale(&(-S::imag_unit()), tol)
        .sub(&q2, tol);
    let sides = vec![
        SideCondition {
            name: "R·P(Q1) = Q1".into(),
            residual: r.mul(&p1, tol).sub(&q1, tol),
            binding: true,
        },
        SideCondition {
            name: "R·P(Q2) = Q2".into(),
            residual: rp2.sub(&q2, tol),
            binding: false,
        },
        SideCondition {
            name: "-R·P(Q2) = Q2".into(),
            residual: rp2.neg().sub(&q2, tol),
            binding: false,
        },
        SideCondition {
            name: "iR·Σ C(k,l)(-a)^(k-l)[Q2^(l)(z) - Q2^(l)(z+c)] = Q2".into(),
            residual: proof_lhs,
            binding: false,
        },
    ];
    let notes = sides[1..]
        .iter()
        .map(|s| {
            format!(
                "{}: {}",
                s.name,
                if s.holds(tol) { "holds" } else { "fails" }
            )
        })
        .collect();
    let rhs = ExpPoly::from_poly(q1.mul(&q2, tol));
    let form = CoshForm::new(a, b, q1, q2, &ctx.tol)?;
    let op = OperatorSpec::diff_delta(k, c, r)?;
    finish("ii", form, op, rhs, sides, vec![], notes, ctx)
}

/// The four parity cases of the mixed delay operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MixedCase {
    I,
    II,
    III,
    IV,
}

impl MixedCase {
    pub fn from_parity(m: u32, n: u32) -> MixedCase {
        match (m.is_multiple_of(2), n.is_multiple_of(2)) {
            (true, true) => MixedCase::I,
            (false, false) => MixedCase::II,
            (true, false) => MixedCase::III,
            (false, true) => MixedCase::IV,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MixedCase::I => "I",
            MixedCase::II => "II",
            MixedCase::III => "III",
            MixedCase::IV => "IV",
        }
    }
}

/// `e^{ac}` and `R` for `R·(A f^{(m)}(z+c) + B f^{(n)}(z))` with `f = cosh(az+b)`.
///
/// With `α = a^m A`, `β = a^n B`, `E = e^{ac}`, the solution needs
/// `iR(αE + β) = 1` and `iR((−1)^m α/E + (−1)^n β) = −1`. Eliminating `R`
/// leaves `αE² + (1 + (−1)^n)βE + (−1)^m α = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedParameters<S> {
    pub case: MixedCase,
    pub alpha: S,
    pub beta: S,
    pub w: S,
    pub r: S,
}

impl<S: Scalar> MixedParameters<S> {
    /// Residuals of the two relations above.
    pub fn relation_residuals(&self, m: u32, n: u32) -> (S, S) {
        let i = S::imag_unit();
        let first = i.clone() * self.r.clone() * (self.alpha.clone() * self.w.clone() + self.beta.clone())
            - S::one();
        let winv = self.w.checked_inv(0.0).unwrap_or_else(S::zero);
        let sm = if m.is_multiple_of(2) { S::one() } else { -S::one() };
        let sn = if n.is_multiple_of(2) { S::one() } else { -S::one() };
        let second = i * self.r.clone() * (sm * self.alpha.clone() * winv + sn * self.beta.clone())
            + S::one();
        (first, second)
    }
}

pub fn mixed_parameters<S: Scalar>(
    m: u32,
    n: u32,
    big_a: &S,
    big_b: &S,
    a: &S,
    branch: Branch,
    tol: f64,
) -> BuildResult<MixedParameters<S>> {
    require_nonzero(big_a, "A", tol)?;
    require_nonzero(big_b, "B", tol)?;
    require_nonzero(a, "a", tol)?;
    let case = MixedCase::from_parity(m, n);
    let alpha = a.pow(m) * big_a.clone();
    let beta = a.pow(n) * big_b.clone();
    let s: S = branch.sign();
    let i = S::imag_unit();
    let degenerate = |detail: &str| BuildError::DegenerateParameters {
        case: case.label().into(),
        detail: detail.into(),
    };
    let quadratic_root = |disc: S| -> BuildResult<S> {
        let root = disc
            .sqrt_builtin()
            .ok_or_else(|| BuildError::NotRepresentable(format!("sqrt({})", describe(&disc))))?;
        div(s.clone() * root - beta.clone(), &alpha, "a^m A", tol)
    };
    let w = match case {
        MixedCase::I => {
            let disc = beta.clone() * beta.clone() - alpha.clone() * alpha.clone();
            if disc.is_zero_within(tol) {
                return Err(degenerate("a^(m-n) = ±B/A"));
            }
            quadratic_root(disc)?
        }
        MixedCase::II => {
            if (beta.clone() + s.clone() * alpha.clone()).is_zero_within(tol) {
                return Err(degenerate("a^(m-n) = ∓B/A for the chosen branch"));
            }
            s.clone()
        }
        MixedCase::III => {
            if (beta.clone() + s.clone() * i.clone() * alpha.clone()).is_zero_within(tol) {
                return Err(degenerate("a^(m-n) = ±iB/A for the chosen branch"));
            }
            s.clone() * i.clone()
        }
        MixedCase::IV => {
            let disc = beta.clone() * beta.clone() + alpha.clone() * alpha.clone();
            if disc.is_zero_within(tol) {
                return Err(degenerate("a^(m-n) = ±iB/A"));
            }
            quadratic_root(disc)?
        }
    };
    let denom = i * (alpha.clone() * w.clone() + beta.clone());
    let r = S::one()
        .checked_div(&denom, tol)
        .ok_or_else(|| degenerate("a^m A e^(ac) + a^n B = 0"))?;
    Ok(MixedParameters {
        case,
        alpha,
        beta,
        w,
        r,
    })
}

fn not_in<S: Scalar>(w: &S, set: &[S], tol: f64) -> bool {
    set.iter().all(|x| !w.approx_eq(x, tol))
}

/// `f = cosh(az + b)` for `R·(A f^{(m)}(z+c) + B f^{(n)}(z))`.
#[allow(clippy::too_many_arguments)]
pub fn build_mixed<S: Scalar>(
    m: u32,
    n: u32,
    big_a: S,
    big_b: S,
    a: S,
    b: S,
    branch: Branch,
    ctx: &Context<S>,
) -> BuildResult<SolutionFamily<S>> {
    let tol = ctx.tol.zero;
    let params = mixed_parameters(m, n, &big_a, &big_b, &a, branch, tol)?;
    let (alpha, beta, w) = (&params.alpha, &params.beta, &params.w);
    let one = S::one();
    let ratio = |x: &S, y: &S| x.checked_div(y, tol).unwrap_or_else(S::zero);
    let mut exclusions = Vec::new();
    let mut notes = Vec::new();
    let mut binding_sets: Vec<(&str, Vec<S>)> = Vec::new();
    match params.case {
        MixedCase::I => {
            let stated = vec![
                one.clone(),
                -one.clone(),
                -ratio(alpha, beta),
                -ratio(beta, alpha),
            ];
            let derived = vec![ratio(alpha, beta), ratio(beta, alpha)];
            exclusions.push(ExclusionCheck::new(
                "e^(ac) not in {±1, -(a^m A / a^n B)^(±1)}",
                not_in(w, &stated, tol),
                true,
            ));
            let derived_ok = not_in(w, &derived, tol);
            exclusions.push(ExclusionCheck::new(
                "e^(ac) not in {(a^m A / a^n B)^(±1)}",
                derived_ok,
                false,
            ));
            if !derived_ok {
                notes.push("e^(ac) lies in {(a^m A / a^n B)^(±1)}; the family still verifies".into());
            }
            binding_sets.push(("{±1, -(a^m A / a^n B)^(±1)}", stated));
        }
        MixedCase::II => {
            exclusions.push(ExclusionCheck::new("e^(ac) = ±1", true, true));
        }
        MixedCase::III => {
            exclusions.push(ExclusionCheck::new("e^(ac) = ±i", true, true));
        }
        MixedCase::IV => {
            let stated = vec![one.clone(), -one, ratio(alpha, beta), -ratio(beta, alpha)];
            exclusions.push(ExclusionCheck::new(
                "e^(ac) not in {±1, a^m A / a^n B, -a^n B / a^m A}",
                not_in(w, &stated, tol),
                true,
            ));
            binding_sets.push(("{±1, a^m A / a^n B, -a^n B / a^m A}", stated));
        }
    }
    for (name, set) in &binding_sets {
        if !not_in(w, set, tol) {
            return Err(BuildError::ExclusionViolated {
                set: (*name).into(),
                value: describe(w),
            });
        }
    }

    // e^{ac} = 1 on the principal branch would give c = 0
    let branch_k = i64::from(w.approx_eq(&S::one(), tol));
    let c = ac_to_c(w, &a, branch_k, &ctx.tol)?;
    let (first, second) = params.relation_residuals(m, n);
    let r2 = params.r.clone() * params.r.clone();
    let mut sides = vec![
        SideCondition::scalar("iR(a^m e^(ac) A + a^n B) = 1", first, true),
        SideCondition::scalar("iR((-a)^m e^(-ac) A + (-a)^n B) = -1", second, true),
    ];
    match params.case {
        MixedCase::I => sides.push(SideCondition::scalar(
            "R^2 (a^2m A^2 - a^2n B^2) = 1",
            r2 * (alpha.clone() * alpha.clone() - beta.clone() * beta.clone()) - S::one(),
            true,
        )),
        MixedCase::IV => sides.push(SideCondition::scalar(
            "R^2 (a^2n B^2 + a^2m A^2) = -1",
            r2 * (alpha.clone() * alpha.clone() + beta.clone() * beta.clone()) + S::one(),
            true,
        )),
        _ => {}
    }
    let form = CoshForm::cosh(a, b, &ctx.tol)?;
    let op = OperatorSpec::mixed_delay(m, n, c, big_a, big_b, Poly::constant(params.r.clone()))?;
    finish(
        params.case.label(),
        form,
        op,
        ExpPoly::one(),
        sides,
        exclusions,
        notes,
        ctx,
    )
}

/// `c = (Log w + 2πi·branch_k)/a`, so that `e^{ac} = w`.
pub fn ac_to_c<S: Scalar>(w: &S, a: &S, branch_k: i64, tol: &Tolerance) -> BuildResult<S> {
    if w.is_zero_within(tol.zero) {
        return Err(BuildError::ZeroW);
    }
    require_nonzero(a, "a", tol.zero)?;
    let log = w
        .ln_builtin()
        .ok_or_else(|| BuildError::NotRepresentable(format!("log({})", describe(w))))?;
    let turn = S::from_i64(2 * branch_k) * S::pi() * S::imag_unit();
    div(log + turn, a, "a", tol.zero)
}

/// Residuals `Σ a_j w^j + i` and `Σ a_j w^{-j} − i`.
pub fn shift_equation_residuals<S: Scalar>(coeffs: &[S], w: &S, tol: f64) -> BuildResult<(S, S)> {
    let winv = w.checked_inv(tol).ok_or(BuildError::ZeroW)?;
    let (mut p, mut q) = (S::zero(), S::zero());
    let (mut wp, mut wq) = (S::one(), S::one());
    for a in coeffs {
        p = p + a.clone() * wp.clone();
        q = q + a.clone() * wq.clone();
        wp = wp * w.clone();
        wq = wq * winv.clone();
    }
    Ok((p + S::imag_unit(), q - S::imag_unit()))
}

fn check_pins<S: Scalar>(tau: usize, pinned: &[(usize, S)], tol: f64) -> BuildResult<()> {
    if tau == 0 {
        return Err(BuildError::Precondition("tau must be at least 1".into()));
    }
    for (j, v) in pinned {
        if *j > tau {
            return Err(BuildError::Precondition(format!(
                "pinned index {j} exceeds tau = {tau}"
            )));
        }
        if *j == tau && v.is_zero_within(tol) {
            return Err(BuildError::LeadingCoefficientZero);
        }
        if pinned.iter().filter(|(k, _)| k == j).count() > 1 {
            return Err(BuildError::Precondition(format!("a_{j} pinned twice")));
        }
    }
    Ok(())
}

/// Solves `rows · a = rhs` over `a_0..a_tau` with some entries pinned.
/// Free unknowns are zero; `a_tau` is the first pivot so it is determined.
fn solve_pinned<S: Scalar>(
    tau: usize,
    rows: &[Vec<S>],
    rhs: &[S],
    pinned: &[(usize, S)],
    tol: f64,
) -> BuildResult<Vec<S>> {
    let free: Vec<usize> = (0..=tau)
        .rev()
        .filter(|j| !pinned.iter().any(|(k, _)| k == j))
        .collect();
    let mut order: Vec<usize> = free.iter().copied().filter(|&j| j == tau).collect();
    order.extend(free.iter().copied().filter(|&j| j != tau).rev());
    let reduced_rhs: Vec<S> = rows
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            pinned
                .iter()
                .fold(r.clone(), |acc, (j, v)| acc - row[*j].clone() * v.clone())
        })
        .collect();
    let matrix: Vec<Vec<S>> = rows
        .iter()
        .map(|row| order.iter().map(|&j| row[j].clone()).collect())
        .collect();
    let local: Vec<usize> = (0..order.len()).collect();
    let x = match linalg::solve(&matrix, &reduced_rhs, &local, tol) {
        Solution::Found { x, .. } => x,
        Solution::Inconsistent { rhs, .. } => {
            return Err(BuildError::Infeasible {
                rule: "pinned_contradiction",
                detail: format!(
                    "the pinned coefficients leave the equation 0 = {}",
                    describe(&rhs)
                ),
            })
        }
    };
    let mut coeffs = vec![S::zero(); tau + 1];
    for (j, v) in pinned {
        coeffs[*j] = v.clone();
    }
    for (slot, v) in order.iter().zip(x) {
        coeffs[*slot] = v;
    }
    Ok(coeffs)
}

fn check_solution<S: Scalar>(coeffs: &[S], tol: f64) -> BuildResult<()> {
    let tau = coeffs.len() - 1;
    if coeffs[tau].is_zero_within(tol) {
        return Err(BuildError::LeadingCoefficientZero);
    }
    if tau == 1
        && (coeffs[0].approx_eq(&coeffs[1], tol) || coeffs[0].approx_eq(&-coeffs[1].clone(), tol))
    {
        return Err(BuildError::SideConditionViolated("tau = 1 needs a_0 != ±a_1".into()));
    }
    Ok(())
}

/// Coefficients `a_0..a_tau` of `Σ a_j f(z + jc)` with `Σ a_j w^j = −i` and
/// `Σ a_j w^{-j} = i`, where `w = e^{ac}`.
pub fn solve_shift_coeffs<S: Scalar>(
    tau: usize,
    w: &S,
    pinned: &[(usize, S)],
    tol: &Tolerance,
) -> BuildResult<Vec<S>> {
    let eps = tol.zero;
    if w.is_zero_within(eps) {
        return Err(BuildError::ZeroW);
    }
    check_pins(tau, pinned, eps)?;
    let i = S::imag_unit();
    if tau == 1 && pinned.len() == 2 {
        // both coefficients given: the first equation fixes w, the second
        // must then hold at that w
        let a0 = pinned.iter().find(|(j, _)| *j == 0).unwrap().1.clone();
        let a1 = pinned.iter().find(|(j, _)| *j == 1).unwrap().1.clone();
        let forced = div(-i.clone() - a0.clone(), &a1, "a_1", eps)?;
        let second = match forced.checked_inv(eps) {
            Some(inv) => a0.clone() + a1.clone() * inv,
            None => S::zero(),
        };
        if forced.is_zero_within(eps) || !second.approx_eq(&i, eps) {
            return Err(BuildError::Infeasible {
                rule: "no_common_multiplier",
                detail: format!(
                    "{a0} + {a1}·w = -i forces w = {}, but then {a0} + {a1}/w = {} != i, \
                     so no w satisfies both equations",
                    describe(&forced),
                    describe(&second),
                    a0 = describe(&a0),
                    a1 = describe(&a1),
                ),
            });
        }
    }
    if w.approx_eq(&S::one(), eps) || w.approx_eq(&-S::one(), eps) {
        return Err(BuildError::Infeasible {
            rule: "unit_multiplier",
            detail: format!(
                "e^(ac) = {} gives both equations the same left side, but -i != i",
                describe(w)
            ),
        });
    }
    let winv = w.checked_inv(eps).ok_or(BuildError::ZeroW)?;
    let rows = vec![
        (0..=tau as u32).map(|j| w.pow(j)).collect::<Vec<S>>(),
        (0..=tau as u32).map(|j| winv.pow(j)).collect(),
    ];
    let coeffs = solve_pinned(tau, &rows, &[-i.clone(), i], pinned, eps)?;
    check_solution(&coeffs, eps)?;
    Ok(coeffs)
}

/// `f = sin(πz/2c)` with `Σ a_j f(z + jc)`: the coefficients solve the
/// alternating sums `a_0 − a_2 + a_4 − … = 0` and `a_1 − a_3 + a_5 − … = −1`.
pub fn build_sin_family<S: Scalar>(
    c: S,
    tau: usize,
    pinned: &[(usize, S)],
    ctx: &Context<S>,
) -> BuildResult<SolutionFamily<S>> {
    let tol = ctx.tol.zero;
    require_nonzero(&c, "c", tol)?;
    check_pins(tau, pinned, tol)?;
    let alternating = |parity: usize| -> Vec<S> {
        (0..=tau)
            .map(|j| {
                if j % 2 != parity {
                    S::zero()
                } else if (j / 2) % 2 == 0 {
                    S::one()
                } else {
                    -S::one()
                }
            })
            .collect()
    };
    let rows = vec![alternating(0), alternating(1)];
    let coeffs = solve_pinned(tau, &rows, &[S::zero(), -S::one()], pinned, tol)?;
    check_solution(&coeffs, tol)?;

    let i = S::imag_unit();
    let a = div(i.clone() * S::pi(), &(S::from_i64(2) * c.clone()), "c", tol)?;
    let b = -(S::pi() * i) * S::from_ratio(1, 2);
    let w = ctx.exp(&(a.clone() * c.clone()))?;
    let (first, second) = shift_equation_residuals(&coeffs, &w, tol)?;
    let sides = vec![
        SideCondition::scalar("Σ a_j e^(jac) = -i", first, true),
        SideCondition::scalar("Σ a_j e^(-jac) = i", second, true),
    ];
    let exclusions = vec![ExclusionCheck::new(
        "e^(ac) != ±1",
        !w.approx_eq(&S::one(), tol) && !w.approx_eq(&-S::one(), tol),
        true,
    )];
    let form = CoshForm::cosh(a, b, &ctx.tol)?;
    let op = OperatorSpec::linear_shift(c, coeffs)?;
    finish("sin", form, op, ExpPoly::one(), sides, exclusions, vec![], ctx)
}

/// `f = cosh(az + b)` with `Σ a_j f(z + jc)`, coefficients from
/// [`solve_shift_coeffs`] at `w = e^{ac}`.
pub fn build_shift_family<S: Scalar>(
    a: S,
    b: S,
    c: S,
    tau: usize,
    pinned: &[(usize, S)],
    ctx: &Context<S>,
) -> BuildResult<SolutionFamily<S>> {
    let tol = ctx.tol.zero;
    require_nonzero(&c, "c", tol)?;
    let w = ctx.exp(&(a.clone() * c.clone()))?;
    let coeffs = solve_shift_coeffs(tau, &w, pinned, &ctx.tol)?;
    let (first, second) = shift_equation_residuals(&coeffs, &w, tol)?;
    let sides = vec![
        SideCondition::scalar("Σ a_j e^(jac) = -i", first, true),
        SideCondition::scalar("Σ a_j e^(-jac) = i", second, true),
    ];
    let exclusions = vec![ExclusionCheck::new("e^(ac) != ±1", true, true)];
    let form = CoshForm::cosh(a, b, &ctx.tol)?;
    let op = OperatorSpec::linear_shift(c, coeffs)?;
    finish("shift", form, op, ExpPoly::one(), sides, exclusions, vec![], ctx)
}

impl<S: Scalar> Serialize for CoshForm<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        #[derive(Serialize)]
        struct Doc {
            a: ScalarDoc,
            b: ScalarDoc,
            q1: PolyDoc,
            q2: PolyDoc,
        }
        Doc {
            a: ScalarDoc::from_scalar(&self.a),
            b: ScalarDoc::from_scalar(&self.b),
            q1: poly_to_doc(&self.q1),
            q2: poly_to_doc(&self.q2),
        }
        .serialize(serializer)
    }
}

impl<S: Scalar> Serialize for SideCondition<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            name: &'a str,
            residual: PolyDoc,
            binding: bool,
            approx_abs: f64,
        }
        Doc {
            name: &self.name,
            residual: poly_to_doc(&self.residual),
            binding: self.binding,
            approx_abs: self
                .residual
                .coeffs()
                .iter()
                .map(|c| c.to_c64().norm())
                .fold(0.0, f64::max),
        }
        .serialize(serializer)
    }
}

impl<S: Scalar> Serialize for SolutionFamily<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        #[derive(Serialize)]
        #[serde(bound = "")]
        struct Doc<'a, S: Scalar> {
            case: &'a str,
            form: &'a CoshForm<S>,
            f: &'a ExpPoly<S>,
            op: &'a OperatorSpec<S>,
            rhs: &'a ExpPoly<S>,
            #[serde(skip_serializing_if = "Option::is_none")]
            r_approx: Option<[f64; 2]>,
            side_conditions: &'a [SideCondition<S>],
            exclusions_checked: &'a [ExclusionCheck],
            notes: &'a [String],
            report: &'a VerificationReport<S>,
        }
        Doc {
            case: &self.case,
            form: &self.form,
            f: &self.f,
            op: &self.op,
            rhs: &self.rhs,
            r_approx: self.r().map(|r| {
                let z = r.to_c64();
                [z.re, z.im]
            }),
            side_conditions: &self.side_conditions,
            exclusions_checked: &self.exclusions_checked,
            notes: &self.notes,
            report: &self.report,
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests;
