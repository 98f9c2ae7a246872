use num_complex::{Complex, Complex64};
use num_traits::{Float, FloatConst, NumCast};

use super::{Backend, Scalar, ScalarError, ScalarValue};

fn to_f64<T: Float>(x: T) -> f64 {
    <f64 as NumCast>::from(x).unwrap_or(f64::NAN)
}

fn from_f64<T: Float>(x: f64) -> T {
    <T as NumCast>::from(x).unwrap_or_else(T::nan)
}

impl<T> Scalar for Complex<T>
where
    T: Float + FloatConst + std::fmt::Debug + Send + Sync + 'static,
{
    const BACKEND: Backend = Backend::Float;

    fn is_zero_within(&self, tol: f64) -> bool {
        to_f64(self.norm()) < tol
    }

    fn checked_inv(&self, tol: f64) -> Option<Self> {
        if self.is_zero_within(tol) || self.norm_sqr().is_zero() {
            None
        } else {
            Some(self.inv())
        }
    }

    fn from_i64(n: i64) -> Self {
        Complex::new(from_f64(n as f64), T::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(from_f64(num as f64 / den as f64), T::zero())
    }

    fn imag_unit() -> Self {
        Complex::i()
    }

    fn pi() -> Self {
        Complex::new(T::PI(), T::zero())
    }

    fn pow(&self, n: u32) -> Self {
        self.powu(n)
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(self.re), to_f64(self.im))
    }

    fn exp_builtin(&self) -> Option<Self> {
        let v = self.exp();
        (v.re.is_finite() && v.im.is_finite()).then_some(v)
    }

    fn ln_builtin(&self) -> Option<Self> {
        (!self.norm_sqr().is_zero()).then(|| self.ln())
    }

    fn sqrt_builtin(&self) -> Option<Self> {
        Some(self.sqrt())
    }

    fn from_c64_snapped(value: Complex64, _max_den: u64, _tol: f64) -> Option<Self> {
        Some(Complex::new(from_f64(value.re), from_f64(value.im)))
    }

    fn to_value(&self) -> ScalarValue {
        ScalarValue::Float(self.to_c64())
    }

    fn from_value(value: &ScalarValue) -> Result<Self, ScalarError> {
        match value {
            ScalarValue::Float(c) => Ok(Complex::new(from_f64(c.re), from_f64(c.im))),
            ScalarValue::Exact(_) => Err(ScalarError::BackendMismatch {
                left: Backend::Float,
                right: Backend::Exact,
            }),
        }
    }
}
