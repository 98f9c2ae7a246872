use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Backend, Exact, Scalar, ScalarError};

/// A scalar tagged with its backend, as it appears on the wire.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarValue {
    Exact(Exact),
    Float(Complex64),
}

impl ScalarValue {
    pub fn backend(&self) -> Backend {
        match self {
            ScalarValue::Exact(_) => Backend::Exact,
            ScalarValue::Float(_) => Backend::Float,
        }
    }

    fn mismatch(&self, other: &ScalarValue) -> ScalarError {
        ScalarError::BackendMismatch {
            left: self.backend(),
            right: other.backend(),
        }
    }

    pub fn add(&self, other: &ScalarValue) -> Result<ScalarValue, ScalarError> {
        match (self, other) {
            (ScalarValue::Exact(a), ScalarValue::Exact(b)) => {
                Ok(ScalarValue::Exact(a.clone() + b.clone()))
            }
            (ScalarValue::Float(a), ScalarValue::Float(b)) => Ok(ScalarValue::Float(a + b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn mul(&self, other: &ScalarValue) -> Result<ScalarValue, ScalarError> {
        match (self, other) {
            (ScalarValue::Exact(a), ScalarValue::Exact(b)) => {
                Ok(ScalarValue::Exact(a.clone() * b.clone()))
            }
            (ScalarValue::Float(a), ScalarValue::Float(b)) => Ok(ScalarValue::Float(a * b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn neg(&self) -> ScalarValue {
        match self {
            ScalarValue::Exact(a) => ScalarValue::Exact(-a.clone()),
            ScalarValue::Float(a) => ScalarValue::Float(-a),
        }
    }

    /// Inverse; `eps_zero` is the float backend's zero threshold.
    pub fn inv(&self, eps_zero: f64) -> Result<ScalarValue, ScalarError> {
        match self {
            ScalarValue::Exact(a) => a
                .checked_inv(eps_zero)
                .map(ScalarValue::Exact)
                .ok_or(ScalarError::DivisionByZero),
            ScalarValue::Float(a) => a
                .checked_inv(eps_zero)
                .map(ScalarValue::Float)
                .ok_or(ScalarError::DivisionByZero),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            ScalarValue::Exact(a) => a.to_c64(),
            ScalarValue::Float(a) => *a,
        }
    }

    pub fn to_doc(&self) -> ScalarDoc {
        match self {
            ScalarValue::Exact(x) => {
                let (re, im) = x.to_strings();
                ScalarDoc {
                    re: NumOrStr::Str(re),
                    im: Some(NumOrStr::Str(im)),
                    backend: Some(Backend::Exact),
                }
            }
            ScalarValue::Float(c) => ScalarDoc {
                re: NumOrStr::Num(c.re),
                im: Some(NumOrStr::Num(c.im)),
                backend: Some(Backend::Float),
            },
        }
    }
}

/// A JSON number or string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumOrStr {
    Num(f64),
    Str(String),
}

impl NumOrStr {
    fn to_exact(&self) -> Result<Exact, ScalarError> {
        match self {
            NumOrStr::Str(s) => s.parse(),
            NumOrStr::Num(x) => BigRational::from_float(*x)
                .map(|r| Exact::from_rational(r, BigRational::zero()))
                .ok_or_else(|| ScalarError::NotExact(x.to_string())),
        }
    }

    fn to_c64(&self) -> Result<Complex64, ScalarError> {
        match self {
            NumOrStr::Num(x) => Ok(Complex64::new(*x, 0.0)),
            NumOrStr::Str(s) => match s.trim().parse::<f64>() {
                Ok(x) => Ok(Complex64::new(x, 0.0)),
                Err(_) => Ok(s.parse::<Exact>()?.to_c64()),
            },
        }
    }
}

/// Wire form of a scalar before its backend is resolved.
///
/// `im` defaults to zero and `backend` to the enclosing document's backend.
/// A bare string or number is accepted as shorthand for `{"re": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarDoc {
    pub re: NumOrStr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<NumOrStr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarDocFull {
    re: NumOrStr,
    #[serde(default)]
    im: Option<NumOrStr>,
    #[serde(default)]
    backend: Option<Backend>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarDocRepr {
    Bare(NumOrStr),
    Full(ScalarDocFull),
}

impl<'de> Deserialize<'de> for ScalarDoc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(match ScalarDocRepr::deserialize(deserializer).map_err(|_| {
            serde::de::Error::custom(
                "expected a scalar: a number, a string, or {\"re\", \"im\", \"backend\"}",
            )
        })? {
            ScalarDocRepr::Bare(re) => ScalarDoc {
                re,
                im: None,
                backend: None,
            },
            ScalarDocRepr::Full(f) => ScalarDoc {
                re: f.re,
                im: f.im,
                backend: f.backend,
            },
        })
    }
}

impl ScalarDoc {
    pub fn resolve(&self, default: Backend) -> Result<ScalarValue, ScalarError> {
        let backend = self.backend.unwrap_or(default);
        if backend != default {
            return Err(ScalarError::BackendMismatch {
                left: default,
                right: backend,
            });
        }
        match backend {
            Backend::Exact => {
                let re = self.re.to_exact()?;
                let im = match &self.im {
                    Some(v) => v.to_exact()?,
                    None => Exact::zero(),
                };
                Ok(ScalarValue::Exact(re + im * Exact::i()))
            }
            Backend::Float => {
                let re = self.re.to_c64()?;
                let im = match &self.im {
                    Some(v) => v.to_c64()?,
                    None => Complex64::new(0.0, 0.0),
                };
                Ok(ScalarValue::Float(re + im * Complex64::i()))
            }
        }
    }

    /// Resolves directly into a typed scalar.
    pub fn to_scalar<S: Scalar>(&self) -> Result<S, ScalarError> {
        S::from_value(&self.resolve(S::BACKEND)?)
    }

    pub fn from_scalar<S: Scalar>(s: &S) -> ScalarDoc {
        s.to_value().to_doc()
    }

    pub fn real(x: f64) -> ScalarDoc {
        ScalarDoc {
            re: NumOrStr::Num(x),
            im: None,
            backend: None,
        }
    }

    pub fn text(re: &str) -> ScalarDoc {
        ScalarDoc {
            re: NumOrStr::Str(re.to_string()),
            im: None,
            backend: None,
        }
    }

    pub fn one() -> ScalarDoc {
        ScalarDoc::real(1.0)
    }
}

impl Serialize for ScalarValue {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ScalarValue {
    /// Without context the backend tag decides; untagged values are exact
    /// when given as strings and float otherwise.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = ScalarDoc::deserialize(deserializer)?;
        let backend = doc.backend.unwrap_or(match doc.re {
            NumOrStr::Str(_) => Backend::Exact,
            NumOrStr::Num(_) => Backend::Float,
        });
        doc.resolve(backend).map_err(serde::de::Error::custom)
    }
}

impl From<Exact> for ScalarValue {
    fn from(x: Exact) -> Self {
        ScalarValue::Exact(x)
    }
}

impl From<Complex64> for ScalarValue {
    fn from(x: Complex64) -> Self {
        ScalarValue::Float(x)
    }
}

impl ScalarValue {
    pub fn one(backend: Backend) -> ScalarValue {
        match backend {
            Backend::Exact => ScalarValue::Exact(Exact::one()),
            Backend::Float => ScalarValue::Float(Complex64::one()),
        }
    }
}
