//! The `fermat-kit` command line: argument parsing, dispatch on spec files
//! and JSON reports.
//!
//! Exit codes: 0 pass, 1 verified failure or infeasible construction,
//! 2 usage or input error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::builder::{self, BuildError};
use crate::exppoly::Context;
use crate::fixtures;
use crate::nonexistence::{self, AnsatzSpace, FunctionClass, SearchError, SearchOptions};
use crate::scalar::{Backend, Exact, Scalar, ScalarDoc};
use crate::spec_file::{
    parse_spec, AnyEquation, BuildParams, Command, EvalParams, GateParams, Pin, SearchParams, SpecError,
    SpecFile, VerifyParams,
};
use crate::verifier::{verify_fermat, verify_nonlinear};

/// Environment variable overriding the zero threshold.
pub const EPS_ENV: &str = "FERMAT_KIT_EPS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "fermat-kit",
    version,
    about = "Verify, build and rule out exponential-polynomial solutions of Fermat-type equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Args, Debug)]
pub struct SpecArg {
    /// Path to a JSON spec file
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Sub {
    /// Check a candidate solution against an equation
    Verify(SpecArg),
    /// Construct a solution family from parameters
    Build(SpecArg),
    /// Report whether the non-existence inequality covers (m, n, tau)
    Gate {
        #[arg(long, conflicts_with_all = ["m", "n", "tau", "class"])]
        spec: Option<PathBuf>,
        #[arg(long, required_unless_present = "spec")]
        m: Option<u32>,
        #[arg(long, required_unless_present = "spec")]
        n: Option<u32>,
        #[arg(long, required_unless_present = "spec")]
        tau: Option<u32>,
        #[arg(long, value_enum, required_unless_present = "spec")]
        class: Option<ClassArg>,
    },
    /// Search a finite ansatz space for solutions
    Search(SpecArg),
    /// Evaluate a function (or a derivative) at points
    Eval(SpecArg),
    /// Run the bundled example corpus
    Fixtures,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum ClassArg {
    Entire,
    Meromorphic,
}

impl From<ClassArg> for FunctionClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Entire => FunctionClass::Entire,
            ClassArg::Meromorphic => FunctionClass::Meromorphic,
        }
    }
}

/// Exit code plus the JSON document for standard output.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub code: i32,
    pub body: Value,
}

impl Report {
    fn new(code: i32, body: Value) -> Self {
        Report { code, body }
    }

    fn input_error(kind: &str, message: impl std::fmt::Display) -> Self {
        Report::new(EXIT_INPUT, json!({"error": kind, "message": message.to_string()}))
    }
}

fn spec_error(e: &SpecError) -> Report {
    let mut body = json!({"error": e.kind(), "message": e.to_string()});
    if let SpecError::Syntax { line, column, .. } | SpecError::Schema { line, column, .. } = e {
        body["line"] = json!(line);
        body["column"] = json!(column);
    }
    Report::new(EXIT_INPUT, body)
}

fn build_error(e: &BuildError) -> Report {
    let (code, kind) = match e {
        BuildError::EvenK { .. } => (EXIT_FAIL, "even_k"),
        BuildError::NonPolynomialQuotient(_) => (EXIT_FAIL, "non_polynomial_quotient"),
        BuildError::ConsistencyFailure(_) => (EXIT_FAIL, "consistency_failure"),
        BuildError::DegenerateParameters { .. } => (EXIT_FAIL, "degenerate_parameters"),
        BuildError::ExclusionViolated { .. } => (EXIT_FAIL, "exclusion_violated"),
        BuildError::Infeasible { .. } => (EXIT_FAIL, "infeasible"),
        BuildError::LeadingCoefficientZero => (EXIT_FAIL, "leading_coefficient_zero"),
        BuildError::SideConditionViolated(_) => (EXIT_FAIL, "side_condition_violated"),
        BuildError::Precondition(_) => (EXIT_INPUT, "precondition"),
        BuildError::ZeroW => (EXIT_INPUT, "zero_multiplier"),
        BuildError::NotRepresentable(_) => (EXIT_INPUT, "not_representable"),
        BuildError::Kernel(_) => (EXIT_INPUT, "kernel_error"),
    };
    let mut body = json!({"error": kind, "message": e.to_string()});
    if let BuildError::Infeasible { rule, .. } = e {
        body["rule"] = json!(rule);
    }
    Report::new(code, body)
}

/// Reads the zero-threshold override.
pub fn eps_from(value: Option<&str>) -> Result<Option<f64>, Report> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x >= 0.0 => Ok(Some(x)),
            _ => Err(Report::input_error(
                "invalid_environment",
                format!("{EPS_ENV} must be a non-negative number, got `{s}`"),
            )),
        },
    }
}

/// Runs the tool on `argv` (including the program name) with the given
/// zero-threshold override text.
pub fn run_with_eps<I, T>(argv: I, eps: Option<&str>) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Report::new(EXIT_PASS, json!({"help": e.to_string()}));
            }
            return Report::input_error("usage", e.to_string());
        }
    };
    let eps = match eps_from(eps) {
        Ok(e) => e,
        Err(r) => return r,
    };
    match cli.command {
        Sub::Verify(a) => from_file(&a.spec, "verify", eps),
        Sub::Build(a) => from_file(&a.spec, "build", eps),
        Sub::Search(a) => from_file(&a.spec, "search", eps),
        Sub::Eval(a) => from_file(&a.spec, "eval", eps),
        Sub::Gate {
            spec: Some(path), ..
        } => from_file(&path, "gate", eps),
        Sub::Gate { m, n, tau, class, .. } => {
            let params = GateParams {
                m: m.expect("required by clap"),
                n: n.expect("required by clap"),
                tau: tau.expect("required by clap"),
                class: class.expect("required by clap").into(),
                op: None,
            };
            execute(&SpecFile::new(Backend::Exact, Command::Gate(params)), eps)
        }
        Sub::Fixtures => run_fixtures(eps),
    }
}

/// Runs the tool with the override taken from the environment.
pub fn run<I, T>(argv: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let eps = std::env::var(EPS_ENV).ok();
    run_with_eps(argv, eps.as_deref())
}

fn from_file(path: &std::path::Path, expected: &str, eps: Option<f64>) -> Report {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => return Report::input_error("io", format!("{}: {e}", path.display())),
    };
    let spec = match parse_spec(&bytes) {
        Ok(s) => s,
        Err(e) => return spec_error(&e),
    };
    if spec.command.name() != expected {
        return Report::input_error(
            "command_mismatch",
            format!(
                "`{expected}` was invoked but the spec file holds a `{}` command",
                spec.command.name()
            ),
        );
    }
    execute(&spec, eps)
}

/// Executes a parsed spec file.
pub fn execute(spec: &SpecFile, eps: Option<f64>) -> Report {
    let mut report = match spec.backend {
        Backend::Exact => execute_in::<Exact>(spec, eps),
        Backend::Float => execute_in::<Complex64>(spec, eps),
    };
    if let Value::Object(map) = &mut report.body {
        map.insert("command".into(), json!(spec.command.name()));
        map.insert("backend".into(), json!(spec.backend));
    }
    report
}

fn execute_in<S: Scalar>(spec: &SpecFile, eps: Option<f64>) -> Report {
    let ctx = match spec.context::<S>(eps) {
        Ok(c) => c,
        Err(e) => return spec_error(&e),
    };
    match &spec.command {
        Command::Verify(p) => verify_cmd(p, &ctx),
        Command::Build(p) => build_cmd(p, &ctx),
        Command::Gate(p) => gate_cmd::<S>(p, &ctx),
        Command::Search(p) => search_cmd(p, &ctx),
        Command::Eval(p) => eval_cmd(p, &ctx),
    }
}

macro_rules! input {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Report::input_error("invalid_input", err),
        }
    };
}

fn verify_cmd<S: Scalar>(p: &VerifyParams, ctx: &Context<S>) -> Report {
    let eq = input!(p.equation.to_equation::<S>(&ctx.tol));
    let f = input!(p.f.to_exppoly(ctx));
    let report = match &eq {
        AnyEquation::Fermat(e) => verify_fermat(&f, e, ctx),
        AnyEquation::NonlinearShift(e) => verify_nonlinear(&f, e, ctx),
    };
    let report = input!(report);
    let passed = report.passed();
    let mut body = serde_json::to_value(&report).expect("reports serialize");
    body["passed"] = json!(passed);
    body["f"] = serde_json::to_value(&f).expect("functions serialize");
    Report::new(if passed { EXIT_PASS } else { EXIT_FAIL }, body)
}

fn pins<S: Scalar>(pinned: &[Pin]) -> Result<Vec<(usize, S)>, crate::scalar::ScalarError> {
    pinned
        .iter()
        .map(|p| Ok((p.index, p.value.to_scalar::<S>()?)))
        .collect()
}

fn build_cmd<S: Scalar>(p: &BuildParams, ctx: &Context<S>) -> Report {
    let s = |d: &ScalarDoc| d.to_scalar::<S>();
    let zero = ctx.tol.zero;
    let family = match p {
        BuildParams::CaseI {
            k,
            c,
            branch_m,
            q1,
            q2,
            b,
        } => builder::build_case_i(*k, input!(s(c)), *branch_m, input!(s(q1)), input!(s(q2)), input!(s(b)), ctx),
        BuildParams::CaseIi { k, a, c, q1, q2, b } => builder::build_case_ii(
            *k,
            input!(s(a)),
            input!(s(c)),
            input!(crate::operators::poly_from_doc::<S>(q1, zero)),
            input!(crate::operators::poly_from_doc::<S>(q2, zero)),
            input!(s(b)),
            ctx,
        ),
        BuildParams::Mixed {
            m,
            n,
            big_a,
            big_b,
            a,
            b,
            branch,
        } => builder::build_mixed(
            *m,
            *n,
            input!(s(big_a)),
            input!(s(big_b)),
            input!(s(a)),
            input!(s(b)),
            *branch,
            ctx,
        ),
        BuildParams::SinFamily { c, tau, pinned } => {
            builder::build_sin_family(input!(s(c)), *tau, &input!(pins::<S>(pinned)), ctx)
        }
        BuildParams::ShiftFamily {
            a,
            b,
            c,
            tau,
            pinned,
        } => builder::build_shift_family(
            input!(s(a)),
            input!(s(b)),
            input!(s(c)),
            *tau,
            &input!(pins::<S>(pinned)),
            ctx,
        ),
        BuildParams::ShiftCoeffs { tau, w, pinned } => {
            let w = input!(s(w));
            return match builder::solve_shift_coeffs(*tau, &w, &input!(pins::<S>(pinned)), &ctx.tol) {
                Ok(coeffs) => {
                    let docs: Vec<ScalarDoc> = coeffs.iter().map(ScalarDoc::from_scalar).collect();
                    Report::new(EXIT_PASS, json!({"operation": "shift_coeffs", "coefficients": docs}))
                }
                Err(e) => build_error(&e),
            };
        }
        BuildParams::AcToC { w, a, branch_k } => {
            return match builder::ac_to_c(&input!(s(w)), &input!(s(a)), *branch_k, &ctx.tol) {
                Ok(c) => Report::new(
                    EXIT_PASS,
                    json!({"operation": "ac_to_c", "c": ScalarDoc::from_scalar(&c)}),
                ),
                Err(e) => build_error(&e),
            };
        }
    };
    match family {
        Ok(fam) => Report::new(
            EXIT_PASS,
            json!({
                "passed": fam.report.passed(),
                "family": serde_json::to_value(&fam).expect("families serialize"),
            }),
        ),
        Err(e) => build_error(&e),
    }
}

fn gate_cmd<S: Scalar>(p: &GateParams, ctx: &Context<S>) -> Report {
    let verdict = match &p.op {
        Some(op) => {
            let op = input!(op.to_spec::<S>(&ctx.tol));
            nonexistence::gate_for_operator(p.m, p.n, &op, p.class)
        }
        None => nonexistence::gate(p.m, p.n, p.tau, p.class),
    };
    let mut body = serde_json::to_value(&verdict).expect("verdicts serialize");
    body["m"] = json!(p.m);
    body["n"] = json!(p.n);
    body["tau"] = json!(p.tau);
    body["class"] = json!(p.class);
    Report::new(EXIT_PASS, body)
}

fn search_cmd<S: Scalar>(p: &SearchParams, ctx: &Context<S>) -> Report {
    let eq = match input!(p.equation.to_equation::<S>(&ctx.tol)) {
        AnyEquation::NonlinearShift(e) => e,
        AnyEquation::Fermat(_) => {
            return Report::input_error("invalid_input", "search needs a nonlinear_shift equation")
        }
    };
    let lattice = match &p.space.lattice {
        Some(l) => input!(l.iter().map(ScalarDoc::to_scalar::<S>).collect::<Result<Vec<S>, _>>()),
        None => {
            use crate::operators::OperatorKind;
            let OperatorKind::LinearShift { c, .. } = eq.op().kind() else {
                return Report::input_error("invalid_input", "the operator must be a linear shift");
            };
            AnsatzSpace::default_lattice(c)
        }
    };
    let space = match AnsatzSpace::new(lattice, p.space.max_degree, p.space.max_terms, &ctx.tol) {
        Ok(s) => s,
        Err(e) => return Report::input_error("invalid_space", e),
    };
    let mut opts = SearchOptions::default();
    let o = &p.options;
    if let Some(t) = o.tol {
        opts.tol = t;
    }
    if let Some(s) = o.starts {
        opts.starts = s;
    }
    if let Some(m) = o.max_iters {
        opts.max_iters = m;
    }
    if let Some(s) = o.seed {
        opts.seed = s;
    }
    if let Some(b) = o.budget {
        opts.budget = b.into();
    }
    match nonexistence::ansatz_search(&eq, &space, ctx, &opts) {
        Ok(out) => Report::new(EXIT_PASS, serde_json::to_value(&out).expect("outcomes serialize")),
        Err(SearchError::BudgetExceeded { supports, budget }) => Report::input_error(
            "budget_exceeded",
            format!("{supports} supports exceed the budget of {budget}"),
        ),
        Err(e) => Report::input_error("search_error", e),
    }
}

fn eval_cmd<S: Scalar>(p: &EvalParams, ctx: &Context<S>) -> Report {
    let f = input!(p.f.to_exppoly(ctx)).derive_with(p.derivative, &ctx.tol);
    let mut values = Vec::with_capacity(p.points.len());
    for &[re, im] in &p.points {
        let v = input!(f.eval(Complex64::new(re, im)));
        values.push([v.re, v.im]);
    }
    Report::new(
        EXIT_PASS,
        json!({
            "f": serde_json::to_value(&f).expect("functions serialize"),
            "derivative": p.derivative,
            "points": p.points,
            "values": values,
        }),
    )
}

fn run_fixtures(eps: Option<f64>) -> Report {
    let results = fixtures::run_all(eps);
    let all = results.iter().all(|r| r.passed);
    Report::new(
        if all { EXIT_PASS } else { EXIT_FAIL },
        json!({
            "command": "fixtures",
            "all_passed": all,
            "fixtures": results,
        }),
    )
}
