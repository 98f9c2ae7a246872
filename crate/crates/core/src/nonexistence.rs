//! Non-existence thresholds for `f^m + q·(L_c f)^n = p`, and a bounded
//! search for exponential-polynomial solutions of that equation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::exppoly::{Context, ExpPoly, ExpTerm, Poly};
use crate::linalg::{self, Solution};
use crate::operators::OperatorKind;
use crate::scalar::{Scalar, ScalarDoc, Tolerance};
use crate::verifier::{verify_nonlinear, NonlinearShiftEquation, VerificationReport, SAMPLE_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionClass {
    Entire,
    Meromorphic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum GateVerdict {
    NonexistenceGuaranteed { rule: String, threshold: u32 },
    NotCovered,
}

impl GateVerdict {
    pub fn is_guaranteed(&self) -> bool {
        matches!(self, GateVerdict::NonexistenceGuaranteed { .. })
    }
}

/// Rule for a general linear shift operator `Σ a_j f(z + jc)`.
pub const RULE_MEROMORPHIC: &str = "linear_shift_meromorphic";
pub const RULE_ENTIRE: &str = "linear_shift_entire";
/// Rules for a single shift `f(z + c)`.
pub const RULE_PURE_SHIFT_MEROMORPHIC: &str = "pure_shift_meromorphic";
pub const RULE_PURE_SHIFT_ENTIRE: &str = "pure_shift_entire";

/// Smallest `m` for which the linear-shift rule applies.
pub fn threshold(n: u32, tau: u32, cls: FunctionClass) -> u32 {
    match cls {
        FunctionClass::Meromorphic => (tau + 1) * (n + 2) + 2,
        FunctionClass::Entire => n + 2,
    }
}

/// Finite-order transcendental solutions are ruled out when
/// `m ≥ (τ+1)(n+2)+2` (meromorphic) or `m ≥ n+2` (entire).
pub fn gate(m: u32, n: u32, tau: u32, cls: FunctionClass) -> GateVerdict {
    if m == 0 || n == 0 || tau == 0 {
        return GateVerdict::NotCovered;
    }
    let t = threshold(n, tau, cls);
    if m < t {
        return GateVerdict::NotCovered;
    }
    let rule = match cls {
        FunctionClass::Meromorphic => RULE_MEROMORPHIC,
        FunctionClass::Entire => RULE_ENTIRE,
    };
    GateVerdict::NonexistenceGuaranteed {
        rule: rule.into(),
        threshold: t,
    }
}

/// Like [`gate`], but also applies the sharper single-shift rules
/// (`m ≥ n+4` meromorphic, `m ≥ n+2` entire) when the operator has exactly
/// one nonzero coefficient. Reports the rule with the lowest threshold.
pub fn gate_for_operator<S: Scalar>(
    m: u32,
    n: u32,
    op: &crate::operators::OperatorSpec<S>,
    cls: FunctionClass,
) -> GateVerdict {
    let OperatorKind::LinearShift { coeffs, .. } = op.kind() else {
        return GateVerdict::NotCovered;
    };
    let tau = (coeffs.len() - 1) as u32;
    let mut best = gate(m, n, tau, cls);
    let pure = coeffs.iter().filter(|a| !a.is_zero_within(0.0)).count() == 1;
    if pure && m >= 1 && n >= 1 {
        let (t, rule) = match cls {
            FunctionClass::Meromorphic => (n + 4, RULE_PURE_SHIFT_MEROMORPHIC),
            FunctionClass::Entire => (n + 2, RULE_PURE_SHIFT_ENTIRE),
        };
        let better = match &best {
            GateVerdict::NotCovered => true,
            GateVerdict::NonexistenceGuaranteed { threshold, .. } => t < *threshold,
        };
        if m >= t && better {
            best = GateVerdict::NonexistenceGuaranteed {
                rule: rule.into(),
                threshold: t,
            };
        }
    }
    best
}

/// The space `f = Σ_{μ ∈ support} P_μ(z)·e^{μz}` searched over: supports are
/// subsets of `lattice` with at most `max_terms` elements and at least one
/// nonzero frequency, each `P_μ` of degree at most `max_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSpace<S> {
    lattice: Vec<S>,
    pub max_degree: usize,
    pub max_terms: usize,
}

impl<S: Scalar> AnsatzSpace<S> {
    pub fn new(lattice: Vec<S>, max_degree: usize, max_terms: usize, tol: &Tolerance) -> Result<Self, SearchError> {
        for (i, x) in lattice.iter().enumerate() {
            if lattice[..i].iter().any(|y| y.approx_eq(x, tol.merge)) {
                return Err(SearchError::InvalidSpace(format!(
                    "frequency {} listed twice",
                    crate::exppoly::describe(x)
                )));
            }
        }
        Ok(AnsatzSpace {
            lattice,
            max_degree,
            max_terms,
        })
    }

    /// `{0} ∪ {jπi/c : 1 ≤ |j| ≤ 4}`.
    pub fn default_lattice(c: &S) -> Vec<S> {
        let unit = S::pi() * S::imag_unit() * c.checked_inv(0.0).expect("c must be nonzero");
        let mut out = vec![S::zero()];
        for j in 1..=4 {
            out.push(unit.clone() * S::from_i64(j));
            out.push(unit.clone() * S::from_i64(-j));
        }
        out
    }

    pub fn standard(c: &S) -> Self {
        AnsatzSpace {
            lattice: Self::default_lattice(c),
            max_degree: 1,
            max_terms: 2,
        }
    }

    pub fn lattice(&self) -> &[S] {
        &self.lattice
    }

    /// Index sets of the supports, in lexicographic order.
    pub fn supports(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(start: usize, len: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            if cur.len() == max {
                return;
            }
            for i in start..len {
                cur.push(i);
                rec(i + 1, len, max, cur, out);
                cur.pop();
            }
        }
        rec(0, self.lattice.len(), self.max_terms, &mut current, &mut out);
        out.retain(|s| s.iter().any(|&i| !self.lattice[i].is_zero_within(0.0)));
        out
    }

    pub fn support_count(&self) -> u128 {
        let len = self.lattice.len() as u128;
        let zero_in = self.lattice.iter().any(|x| x.is_zero_within(0.0));
        let mut total = 0u128;
        let mut binom = 1u128;
        for t in 1..=(self.max_terms as u128).min(len) {
            binom = binom * (len - t + 1) / t;
            total += binom;
        }
        // the support {0} alone is not searched
        total - u128::from(zero_in && self.max_terms >= 1)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Sample-residual bound for accepting a candidate.
    pub tol: f64,
    pub starts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Largest number of supports that will be attempted.
    pub budget: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            tol: SAMPLE_TOL,
            starts: 12,
            max_iters: 200,
            seed: 0x5eed,
            budget: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SearchError {
    #[error("search space has {supports} supports, over the budget of {budget}")]
    BudgetExceeded { supports: u128, budget: u128 },
    #[error("invalid ansatz space: {0}")]
    InvalidSpace(String),
    #[error(transparent)]
    Kernel(#[from] crate::error::KernelError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoundSolution<S> {
    pub f: ExpPoly<S>,
    pub support: Vec<usize>,
    pub report: VerificationReport<S>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportResidual {
    pub support: Vec<usize>,
    /// Smallest Euclidean norm of the coefficient residual over all starts.
    pub residual: f64,
}

/// Record that no solution was found in the searched space. It says nothing
/// about solutions outside it.
#[derive(Clone, Debug, PartialEq)]
pub struct ExhaustionCertificate<S> {
    pub space: AnsatzSpace<S>,
    pub supports_total: usize,
    pub supports_pruned: usize,
    pub supports_solved: usize,
    pub starts_per_support: usize,
    pub seed: u64,
    pub tol: f64,
    pub rejected_candidates: usize,
    pub best: Vec<SupportResidual>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome<S> {
    Solutions(Vec<FoundSolution<S>>),
    Exhausted(ExhaustionCertificate<S>),
}

impl<S> SearchOutcome<S> {
    pub fn solutions(&self) -> &[FoundSolution<S>] {
        match self {
            SearchOutcome::Solutions(s) => s,
            SearchOutcome::Exhausted(_) => &[],
        }
    }
}

/// Generic directions for the dominant-frequency test.
const DIRECTIONS: [f64; 6] = [0.1234, 1.3, 2.2345, 3.4567, 4.5678, 5.6789];

fn extreme(freqs: &[Complex64], theta: f64) -> Option<Complex64> {
    let dir = Complex64::from_polar(1.0, -theta);
    freqs
        .iter()
        .copied()
        .max_by(|a, b| (a * dir).re.partial_cmp(&(b * dir).re).unwrap())
}

fn sums(base: &[Complex64], k: u32) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0)];
    for _ in 0..k {
        let mut next: Vec<Complex64> = Vec::new();
        for a in &acc {
            for b in base {
                let s = a + b;
                if !next.iter().any(|x| (x - s).norm() < 1e-9) {
                    next.push(s);
                }
            }
        }
        acc = next;
    }
    acc
}

fn freqs_of(f: &ExpPoly<Complex64>) -> Vec<Complex64> {
    f.frequencies().copied().collect()
}

/// Residual pieces of the equation at a fixed support, in binary64.
struct Problem<'a> {
    eq: &'a NonlinearShiftEquation<Complex64>,
    ctx: Context<Complex64>,
    freqs: Vec<Complex64>,
    degree: usize,
    basis: Vec<ExpPoly<Complex64>>,
    l_basis: Vec<ExpPoly<Complex64>>,
    keys: Vec<(Complex64, usize)>,
}

impl<'a> Problem<'a> {
    fn new(eq: &'a NonlinearShiftEquation<Complex64>, freqs: Vec<Complex64>, degree: usize) -> crate::Result<Self> {
        // tolerance 0 keeps every coefficient, so the residual vector has a
        // fixed layout
        let ctx = Context::new(Tolerance::new(0.0, Tolerance::DEFAULT_MERGE));
        let mut basis = Vec::new();
        for mu in &freqs {
            for d in 0..=degree {
                basis.push(ExpPoly::term(Poly::monomial(Complex64::new(1.0, 0.0), d), *mu));
            }
        }
        let l_basis = basis
            .iter()
            .map(|b| eq.op().apply(b, &ctx))
            .collect::<crate::Result<Vec<_>>>()?;
        let (m, n) = (eq.m(), eq.n());
        let mut key_freqs: Vec<Complex64> = Vec::new();
        let mut push = |x: Complex64| {
            if !key_freqs.iter().any(|y| (y - x).norm() < 1e-9) {
                key_freqs.push(x);
            }
        };
        for nu in freqs_of(eq.lhs_factor()) {
            for s in sums(&freqs, m) {
                push(nu + s);
            }
        }
        for nu in freqs_of(eq.q()) {
            for s in sums(&freqs, n) {
                push(nu + s);
            }
        }
        for nu in freqs_of(eq.p()) {
            push(nu);
        }
        let top = (eq.lhs_factor().max_degree() + m as usize * degree)
            .max(eq.q().max_degree() + n as usize * degree)
            .max(eq.p().max_degree());
        let keys = key_freqs
            .iter()
            .flat_map(|mu| (0..=top).map(move |d| (*mu, d)))
            .collect();
        Ok(Problem {
            eq,
            ctx,
            freqs,
            degree,
            basis,
            l_basis,
            keys,
        })
    }

    fn unknowns(&self) -> usize {
        self.basis.len()
    }

    fn candidate(&self, x: &[Complex64]) -> ExpPoly<Complex64> {
        let d = self.degree + 1;
        let terms = self
            .freqs
            .iter()
            .enumerate()
            .map(|(i, mu)| ExpTerm::new(Poly::from_coeffs(x[i * d..(i + 1) * d].to_vec(), 0.0), *mu))
            .collect();
        ExpPoly::normalize(terms, &self.ctx.tol)
    }

    fn flatten(&self, g: &ExpPoly<Complex64>) -> Vec<Complex64> {
        self.keys
            .iter()
            .map(|(mu, d)| g.poly_at(mu, 1e-9).coeff(*d))
            .collect()
    }

    /// Residual vector and Jacobian columns at `x`.
    fn eval(&self, x: &[Complex64], jacobian: bool) -> crate::Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
        let tol = &self.ctx.tol;
        let eq = self.eq;
        let f = self.candidate(x);
        let lf = eq.op().apply(&f, &self.ctx)?;
        let fm1 = f.pow_with(eq.m() - 1, tol);
        let lfn1 = lf.pow_with(eq.n() - 1, tol);
        let left = eq.lhs_factor().mul_with(&fm1.mul_with(&f, tol), tol);
        let right = eq.q().mul_with(&lfn1.mul_with(&lf, tol), tol);
        let r = left.add_with(&right, tol).sub_with(eq.p(), tol);
        let rv = self.flatten(&r);
        if !jacobian {
            return Ok((rv, vec![]));
        }
        let g = eq
            .lhs_factor()
            .mul_with(&fm1, tol)
            .scale_with(&Complex64::new(eq.m() as f64, 0.0), tol);
        let h = eq
            .q()
            .mul_with(&lfn1, tol)
            .scale_with(&Complex64::new(eq.n() as f64, 0.0), tol);
        let cols = self
            .basis
            .iter()
            .zip(&self.l_basis)
            .map(|(b, lb)| self.flatten(&g.mul_with(b, tol).add_with(&h.mul_with(lb, tol), tol)))
            .collect();
        Ok((rv, cols))
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Levenberg-Marquardt on the holomorphic residual `r(x)`.
fn levenberg_marquardt(p: &Problem, mut x: Vec<Complex64>, max_iters: usize) -> crate::Result<(Vec<Complex64>, f64)> {
    let nvar = x.len();
    let (mut r, mut cols) = p.eval(&x, true)?;
    let mut cost = norm2(&r);
    let mut lambda = 1e-3;
    for _ in 0..max_iters {
        if cost < 1e-28 || !cost.is_finite() {
            break;
        }
        // normal equations (JᴴJ + λ·diag) δ = −Jᴴ r
        let mut a = vec![vec![Complex64::new(0.0, 0.0); nvar]; nvar];
        let mut rhs = vec![Complex64::new(0.0, 0.0); nvar];
        for i in 0..nvar {
            for j in i..nvar {
                let s: Complex64 = cols[i].iter().zip(&cols[j]).map(|(u, v)| u.conj() * v).sum();
                a[i][j] = s;
                a[j][i] = s.conj();
            }
            rhs[i] = -cols[i].iter().zip(&r).map(|(u, v)| u.conj() * v).sum::<Complex64>();
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = a.clone();
            for (i, row) in damped.iter_mut().enumerate() {
                row[i] += lambda * (1.0 + a[i][i].re);
            }
            let order: Vec<usize> = (0..nvar).collect();
            let delta = match linalg::solve(&damped, &rhs, &order, 1e-300) {
                Solution::Found { x, .. } => x,
                Solution::Inconsistent { .. } => break,
            };
            let trial: Vec<Complex64> = x.iter().zip(&delta).map(|(u, d)| u + d).collect();
            let (tr, _) = p.eval(&trial, false)?;
            let tc = norm2(&tr);
            if tc.is_finite() && tc < cost {
                x = trial;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
        let next = p.eval(&x, true)?;
        r = next.0;
        cols = next.1;
        cost = norm2(&r);
    }
    Ok((x, cost.sqrt()))
}

/// Necessary condition from the dominant frequency of `lhs_factor·f^m`: in
/// a generic direction its extreme frequency has a nonzero coefficient, so
/// it must also be a frequency of `q·(Lf)^n` or of `p`.
fn survives_dominance(eq: &NonlinearShiftEquation<Complex64>, support: &[Complex64]) -> bool {
    let lhs = freqs_of(eq.lhs_factor());
    let mut possible: Vec<Complex64> = Vec::new();
    for nu in freqs_of(eq.q()) {
        for s in sums(support, eq.n()) {
            possible.push(nu + s);
        }
    }
    possible.extend(freqs_of(eq.p()));
    DIRECTIONS.iter().all(|&theta| {
        let top = extreme(&lhs, theta).unwrap() + extreme(support, theta).unwrap() * eq.m() as f64;
        possible.iter().any(|x| (x - top).norm() < 1e-9)
    })
}

struct SupportRun {
    index: usize,
    pruned: bool,
    best: f64,
    candidates: Vec<Vec<Complex64>>,
}

fn run_support(
    eq: &NonlinearShiftEquation<Complex64>,
    freqs: Vec<Complex64>,
    degree: usize,
    index: usize,
    opts: &SearchOptions,
) -> crate::Result<SupportRun> {
    if !survives_dominance(eq, &freqs) {
        return Ok(SupportRun {
            index,
            pruned: true,
            best: f64::INFINITY,
            candidates: vec![],
        });
    }
    let problem = Problem::new(eq, freqs, degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut best = f64::INFINITY;
    let mut candidates = Vec::new();
    for _ in 0..opts.starts {
        let x0: Vec<Complex64> = (0..problem.unknowns())
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let (x, res) = levenberg_marquardt(&problem, x0, opts.max_iters)?;
        best = best.min(res);
        if res < 1e-10 {
            candidates.push(x);
        }
    }
    Ok(SupportRun {
        index,
        pruned: false,
        best,
        candidates,
    })
}

/// Brings a binary64 candidate into the backend `S`, on the lattice.
fn lift<S: Scalar>(
    x: &[Complex64],
    support: &[usize],
    space: &AnsatzSpace<S>,
    tol: &Tolerance,
) -> Option<ExpPoly<S>> {
    let d = space.max_degree + 1;
    let mut terms = Vec::new();
    for (k, &i) in support.iter().enumerate() {
        let coeffs = x[k * d..(k + 1) * d]
            .iter()
            .map(|z| {
                let z = Complex64::new(
                    if z.re.abs() < 1e-9 { 0.0 } else { z.re },
                    if z.im.abs() < 1e-9 { 0.0 } else { z.im },
                );
                S::from_c64_snapped(z, 64, 1e-7)
            })
            .collect::<Option<Vec<S>>>()?;
        terms.push(ExpTerm::new(Poly::from_coeffs(coeffs, tol.zero), space.lattice[i].clone()));
    }
    Some(ExpPoly::normalize(terms, tol))
}

/// Searches `space` for transcendental solutions of `eq`.
///
/// Supports are solved independently (in parallel) by Levenberg-Marquardt
/// from `opts.starts` seeded random starts. A candidate is reported only if
/// it verifies in the backend `S` (exact backends snap its coefficients to
/// small Gaussian rationals first) with sampled residual below `opts.tol`.
pub fn ansatz_search<S: Scalar>(
    eq: &NonlinearShiftEquation<S>,
    space: &AnsatzSpace<S>,
    ctx: &Context<S>,
    opts: &SearchOptions,
) -> Result<SearchOutcome<S>, SearchError> {
    let count = space.support_count();
    if count > opts.budget {
        return Err(SearchError::BudgetExceeded {
            supports: count,
            budget: opts.budget,
        });
    }
    let supports = space.supports();
    let eq64 = eq.to_c64();
    let lattice64: Vec<Complex64> = space.lattice.iter().map(Scalar::to_c64).collect();
    let mut runs = supports
        .par_iter()
        .enumerate()
        .map(|(index, s)| {
            let freqs = s.iter().map(|&i| lattice64[i]).collect();
            run_support(&eq64, freqs, space.max_degree, index, opts)
        })
        .collect::<crate::Result<Vec<_>>>()?;
    runs.sort_by_key(|r| r.index);

    let mut found: Vec<FoundSolution<S>> = Vec::new();
    let mut rejected = 0;
    for run in &runs {
        for x in &run.candidates {
            let support = &supports[run.index];
            let accepted = lift(x, support, space, &ctx.tol).and_then(|f| {
                if f.growth_order() == 0 {
                    return None;
                }
                let report = verify_nonlinear(&f, eq, ctx).ok()?;
                (report.symbolic_pass && report.sample_max_abs < opts.tol).then_some((f, report))
            });
            match accepted {
                Some((f, report)) => {
                    if !found.iter().any(|g| g.f == f) {
                        found.push(FoundSolution {
                            f,
                            support: support.clone(),
                            report,
                        });
                    }
                }
                None => rejected += 1,
            }
        }
    }
    if !found.is_empty() {
        found.sort_by(|a, b| {
            let key = |s: &FoundSolution<S>| {
                s.f.terms()
                    .iter()
                    .flat_map(|t| {
                        let k = t.freq.sort_key();
                        let mut v = vec![k.0, k.1];
                        v.extend(t.poly.coeffs().iter().flat_map(|c| {
                            let z = c.to_c64();
                            [z.re, z.im]
                        }));
                        v
                    })
                    .collect::<Vec<f64>>()
            };
            key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal)
        });
        return Ok(SearchOutcome::Solutions(found));
    }
    let mut best: Vec<SupportResidual> = runs
        .iter()
        .filter(|r| !r.pruned)
        .map(|r| SupportResidual {
            support: supports[r.index].clone(),
            residual: r.best,
        })
        .collect();
    best.sort_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap_or(std::cmp::Ordering::Equal));
    best.truncate(5);
    Ok(SearchOutcome::Exhausted(ExhaustionCertificate {
        space: space.clone(),
        supports_total: supports.len(),
        supports_pruned: runs.iter().filter(|r| r.pruned).count(),
        supports_solved: runs.iter().filter(|r| !r.pruned).count(),
        starts_per_support: opts.starts,
        seed: opts.seed,
        tol: opts.tol,
        rejected_candidates: rejected,
        best,
    }))
}

impl<S: Scalar> Serialize for AnsatzSpace<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        #[derive(Serialize)]
        struct Doc {
            freq_lattice: Vec<ScalarDoc>,
            max_degree: usize,
            max_terms: usize,
        }
        Doc {
            freq_lattice: self.lattice.iter().map(ScalarDoc::from_scalar).collect(),
            max_degree: self.max_degree,
            max_terms: self.max_terms,
        }
        .serialize(serializer)
    }
}

impl<S: Scalar> Serialize for ExhaustionCertificate<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        #[derive(Serialize)]
        #[serde(bound = "")]
        struct Doc<'a, S: Scalar> {
            space: &'a AnsatzSpace<S>,
            supports_total: usize,
            supports_pruned: usize,
            supports_solved: usize,
            starts_per_support: usize,
            seed: u64,
            tol: f64,
            rejected_candidates: usize,
            best: &'a [SupportResidual],
        }
        Doc {
            space: &self.space,
            supports_total: self.supports_total,
            supports_pruned: self.supports_pruned,
            supports_solved: self.supports_solved,
            starts_per_support: self.starts_per_support,
            seed: self.seed,
            tol: self.tol,
            rejected_candidates: self.rejected_candidates,
            best: &self.best,
        }
        .serialize(serializer)
    }
}

impl<S: Scalar> Serialize for FoundSolution<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        #[derive(Serialize)]
        #[serde(bound = "")]
        struct Doc<'a, S: Scalar> {
            f: &'a ExpPoly<S>,
            support: &'a [usize],
            report: &'a VerificationReport<S>,
        }
        Doc {
            f: &self.f,
            support: &self.support,
            report: &self.report,
        }
        .serialize(serializer)
    }
}

impl<S: Scalar> Serialize for SearchOutcome<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        #[derive(Serialize)]
        #[serde(bound = "", tag = "outcome", rename_all = "snake_case")]
        enum Doc<'a, S: Scalar> {
            Solutions { solutions: &'a [FoundSolution<S>] },
            ExhaustionCertificate { certificate: &'a ExhaustionCertificate<S> },
        }
        match self {
            SearchOutcome::Solutions(s) => Doc::Solutions { solutions: s },
            SearchOutcome::Exhausted(c) => Doc::ExhaustionCertificate { certificate: c },
        }
        .serialize(serializer)
    }
}
