//! JSON equation-spec files: the input format of the command-line tool.
//!
//! ```json
//! {
//!   "version": "1",
//!   "backend": "exact",
//!   "declared_exponentials": [{"exponent": "3*pi*i", "value": "-1"}],
//!   "command": "verify",
//!   "params": { "equation": {...}, "f": {...} }
//! }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::builder::{Branch, CoshForm};
use crate::error::KernelError;
use crate::exppoly::{Context, ExpPoly, ExpPolyDoc, ExpTermDoc};
use crate::nonexistence::FunctionClass;
use crate::operators::{poly_from_doc, OperatorDoc, PolyDoc};
use crate::scalar::{Backend, Scalar, ScalarDoc, ScalarError, Tolerance};
use crate::verifier::{FermatEquation, NonlinearShiftEquation};

pub const SPEC_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpDeclaration {
    pub exponent: ScalarDoc,
    pub value: ScalarDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub version: String,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Tolerance>,
    #[serde(default)]
    pub declared_exponentials: Vec<ExpDeclaration>,
    #[serde(flatten)]
    pub command: Command,
}

fn default_backend() -> Backend {
    Backend::Exact
}

/// The command and its parameter block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "snake_case")]
pub enum Command {
    Verify(VerifyParams),
    Build(BuildParams),
    Gate(GateParams),
    Search(SearchParams),
    Eval(EvalParams),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Build(_) => "build",
            Command::Gate(_) => "gate",
            Command::Search(_) => "search",
            Command::Eval(_) => "eval",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EquationDoc {
    /// `f² + (op f)² = rhs`.
    Fermat { op: OperatorDoc, rhs: ExpPolyDoc },
    /// `lhs_factor·fᵐ + q·(L f)ⁿ = p`.
    NonlinearShift {
        m: u32,
        n: u32,
        q: ExpPolyDoc,
        p: ExpPolyDoc,
        op: OperatorDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lhs_factor: Option<ExpPolyDoc>,
    },
}

/// A typed equation.
#[derive(Clone, Debug)]
pub enum AnyEquation<S> {
    Fermat(FermatEquation<S>),
    NonlinearShift(NonlinearShiftEquation<S>),
}

impl EquationDoc {
    pub fn to_equation<S: Scalar>(&self, tol: &Tolerance) -> Result<AnyEquation<S>, KernelError> {
        Ok(match self {
            EquationDoc::Fermat { op, rhs } => {
                AnyEquation::Fermat(FermatEquation::new(op.to_spec(tol)?, rhs.to_exppoly(tol)?)?)
            }
            EquationDoc::NonlinearShift {
                m,
                n,
                q,
                p,
                op,
                lhs_factor,
            } => {
                let eq = NonlinearShiftEquation::new(
                    *m,
                    *n,
                    q.to_exppoly(tol)?,
                    p.to_exppoly(tol)?,
                    op.to_spec(tol)?,
                )?;
                AnyEquation::NonlinearShift(match lhs_factor {
                    Some(d) => eq.with_lhs_factor(d.to_exppoly(tol)?)?,
                    None => eq,
                })
            }
        })
    }
}

/// `(Q1·e^{az+b} + Q2·e^{-(az+b)})/2`; `b` defaults to 0 and `Q1`, `Q2` to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoshDoc {
    pub a: ScalarDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<ScalarDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<PolyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<PolyDoc>,
}

/// A function: either explicit terms or a cosh form. Exactly one is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<ExpTermDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cosh_form: Option<CoshDoc>,
}

#[derive(Debug, Error)]
pub enum FunctionDocError {
    #[error("a function needs exactly one of `terms` and `cosh_form`")]
    Shape,
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Build(#[from] crate::builder::BuildError),
}

impl From<ScalarError> for FunctionDocError {
    fn from(e: ScalarError) -> Self {
        FunctionDocError::Kernel(e.into())
    }
}

impl FunctionDoc {
    pub fn terms(terms: Vec<ExpTermDoc>) -> Self {
        FunctionDoc {
            terms: Some(terms),
            cosh_form: None,
        }
    }

    pub fn to_exppoly<S: Scalar>(&self, ctx: &Context<S>) -> Result<ExpPoly<S>, FunctionDocError> {
        match (&self.terms, &self.cosh_form) {
            (Some(terms), None) => Ok(ExpPolyDoc {
                terms: terms.clone(),
            }
            .to_exppoly(&ctx.tol)?),
            (None, Some(c)) => {
                let zero = ctx.tol.zero;
                let poly = |p: &Option<PolyDoc>| match p {
                    Some(p) => poly_from_doc::<S>(p, zero),
                    None => Ok(crate::exppoly::Poly::one()),
                };
                let b = match &c.b {
                    Some(b) => b.to_scalar::<S>()?,
                    None => S::zero(),
                };
                let form = CoshForm::new(c.a.to_scalar::<S>()?, b, poly(&c.q1)?, poly(&c.q2)?, &ctx.tol)?;
                Ok(form.render(ctx)?)
            }
            _ => Err(FunctionDocError::Shape),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    pub equation: EquationDoc,
    pub f: FunctionDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pin {
    pub index: usize,
    pub value: ScalarDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "operation", rename_all = "snake_case", deny_unknown_fields)]
pub enum BuildParams {
    CaseI {
        k: u32,
        c: ScalarDoc,
        #[serde(default)]
        branch_m: i64,
        q1: ScalarDoc,
        q2: ScalarDoc,
        b: ScalarDoc,
    },
    CaseIi {
        k: u32,
        a: ScalarDoc,
        c: ScalarDoc,
        q1: PolyDoc,
        q2: PolyDoc,
        b: ScalarDoc,
    },
    Mixed {
        m: u32,
        n: u32,
        #[serde(rename = "A")]
        big_a: ScalarDoc,
        #[serde(rename = "B")]
        big_b: ScalarDoc,
        a: ScalarDoc,
        b: ScalarDoc,
        branch: Branch,
    },
    ShiftCoeffs {
        tau: usize,
        w: ScalarDoc,
        #[serde(default)]
        pinned: Vec<Pin>,
    },
    SinFamily {
        c: ScalarDoc,
        tau: usize,
        #[serde(default)]
        pinned: Vec<Pin>,
    },
    ShiftFamily {
        a: ScalarDoc,
        b: ScalarDoc,
        c: ScalarDoc,
        tau: usize,
        #[serde(default)]
        pinned: Vec<Pin>,
    },
    AcToC {
        w: ScalarDoc,
        a: ScalarDoc,
        #[serde(default)]
        branch_k: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateParams {
    pub m: u32,
    pub n: u32,
    pub tau: u32,
    pub class: FunctionClass,
    /// When given, single-shift operators get their sharper rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<OperatorDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    /// Explicit frequencies; without them the default lattice for the
    /// operator's shift is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<ScalarDoc>>,
    #[serde(default = "default_degree")]
    pub max_degree: usize,
    #[serde(default = "default_terms")]
    pub max_terms: usize,
}

fn default_degree() -> usize {
    1
}

fn default_terms() -> usize {
    2
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchOptionsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    pub equation: EquationDoc,
    pub space: SpaceDoc,
    #[serde(default)]
    pub options: SearchOptionsDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalParams {
    pub f: FunctionDoc,
    /// Points as `[re, im]`.
    pub points: Vec<[f64; 2]>,
    #[serde(default)]
    pub derivative: u32,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("exp({exponent}) declared twice with different values ({first} and {second})")]
    DuplicateExponential {
        exponent: String,
        first: String,
        second: String,
    },
    #[error("invalid declared exponential: {0}")]
    Declaration(KernelError),
}

impl SpecError {
    pub fn kind(&self) -> &'static str {
        match self {
            SpecError::Syntax { .. } => "syntax_error",
            SpecError::Schema { .. } => "schema_error",
            SpecError::DuplicateExponential { .. } => "duplicate_exponential",
            SpecError::Declaration(_) => "declaration_error",
        }
    }
}

/// Parses and validates a spec file.
pub fn parse_spec(text: &[u8]) -> Result<SpecFile, SpecError> {
    let spec: SpecFile = serde_json::from_slice(text).map_err(|e| {
        let (line, column, message) = (e.line(), e.column(), e.to_string());
        match e.classify() {
            serde_json::error::Category::Data => SpecError::Schema {
                line,
                column,
                message,
            },
            _ => SpecError::Syntax {
                line,
                column,
                message,
            },
        }
    })?;
    if spec.version != SPEC_VERSION {
        return Err(SpecError::Schema {
            line: 1,
            column: 1,
            message: format!("unsupported version `{}`, expected `{SPEC_VERSION}`", spec.version),
        });
    }
    match spec.backend {
        Backend::Exact => spec.context::<crate::scalar::Exact>(None).map(|_| ())?,
        Backend::Float => spec.context::<num_complex::Complex64>(None).map(|_| ())?,
    }
    Ok(spec)
}

/// Pretty-printed JSON; `parse_spec` reads it back to an equal value.
pub fn print_spec(spec: &SpecFile) -> String {
    serde_json::to_string_pretty(spec).expect("spec files serialize")
}

impl SpecFile {
    pub fn new(backend: Backend, command: Command) -> Self {
        SpecFile {
            version: SPEC_VERSION.into(),
            backend,
            tolerance: None,
            declared_exponentials: vec![],
            command,
        }
    }

    /// Tolerances of the file, with `eps_zero` overriding the zero threshold.
    pub fn tolerance(&self, eps_zero: Option<f64>) -> Tolerance {
        let mut tol = self.tolerance.unwrap_or_default();
        if let Some(eps) = eps_zero {
            tol.zero = eps;
        }
        tol
    }

    /// The evaluation context: tolerances plus declared exponentials.
    pub fn context<S: Scalar>(&self, eps_zero: Option<f64>) -> Result<Context<S>, SpecError> {
        let mut ctx = Context::new(self.tolerance(eps_zero));
        for d in &self.declared_exponentials {
            let exponent = d
                .exponent
                .to_scalar::<S>()
                .map_err(|e| SpecError::Declaration(e.into()))?;
            let value = d.value.to_scalar::<S>().map_err(|e| SpecError::Declaration(e.into()))?;
            ctx.declare(exponent, value).map_err(|e| match e {
                KernelError::DuplicateExponential {
                    exponent,
                    first,
                    second,
                } => SpecError::DuplicateExponential {
                    exponent,
                    first,
                    second,
                },
                other => SpecError::Declaration(other),
            })?;
        }
        Ok(ctx)
    }
}
