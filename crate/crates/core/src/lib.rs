//! Exponential polynomials, the delay-differential and shift operators
//! acting on them, and tools to verify, construct and rule out solutions of
//! Fermat-type functional equations.

pub mod dd;
pub mod error;
pub mod builder;
pub mod cli;
pub mod exppoly;
pub mod fixtures;
pub mod linalg;
pub mod nonexistence;
pub mod operators;
pub mod random;
pub mod verifier;
pub mod scalar;
pub mod spec_file;

use num_complex::Complex;

pub use error::{KernelError, Result};
pub use builder::{BuildError, Branch, CoshForm, SolutionFamily};
pub use exppoly::{Context, ExpPoly, ExpTerm, Poly};
pub use operators::OperatorSpec;
pub use verifier::{FermatEquation, NonlinearShiftEquation, VerificationReport};
pub use scalar::{Backend, Exact, Scalar, ScalarValue, Tolerance};
pub use spec_file::{parse_spec, print_spec, SpecError, SpecFile};

pub type ExactPoly = Poly<Exact>;
pub type FloatPoly = Poly<Complex<f64>>;
pub type ExactExpPoly = ExpPoly<Exact>;
pub type FloatExpPoly = ExpPoly<Complex<f64>>;
pub type Float32ExpPoly = ExpPoly<Complex<f32>>;
pub type ExactContext = Context<Exact>;
pub type FloatContext = Context<Complex<f64>>;
pub type ExactOperator = OperatorSpec<Exact>;
pub type FloatOperator = OperatorSpec<Complex<f64>>;
