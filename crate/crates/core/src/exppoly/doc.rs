use serde::{Deserialize, Serialize, Serializer};

use super::{ExpPoly, ExpTerm, Poly};
use crate::scalar::{Scalar, ScalarDoc, ScalarError, Tolerance};

/// Wire form of one term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpTermDoc {
    pub poly: Vec<ScalarDoc>,
    pub freq: ScalarDoc,
}

/// Wire form of an exponential polynomial. Input may be denormalized;
/// output is always canonical.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpPolyDoc {
    pub terms: Vec<ExpTermDoc>,
}

impl ExpPolyDoc {
    pub fn from_exppoly<S: Scalar>(f: &ExpPoly<S>) -> Self {
        ExpPolyDoc {
            terms: f
                .terms()
                .iter()
                .map(|t| ExpTermDoc {
                    poly: t.poly.coeffs().iter().map(ScalarDoc::from_scalar).collect(),
                    freq: ScalarDoc::from_scalar(&t.freq),
                })
                .collect(),
        }
    }

    pub fn to_exppoly<S: Scalar>(&self, tol: &Tolerance) -> Result<ExpPoly<S>, ScalarError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let coeffs = t
                .poly
                .iter()
                .map(ScalarDoc::to_scalar::<S>)
                .collect::<Result<Vec<_>, _>>()?;
            terms.push(ExpTerm::new(
                Poly::from_coeffs(coeffs, tol.zero),
                t.freq.to_scalar::<S>()?,
            ));
        }
        Ok(ExpPoly::normalize(terms, tol))
    }

    /// A polynomial at frequency zero.
    pub fn polynomial(coeffs: Vec<ScalarDoc>) -> Self {
        ExpPolyDoc {
            terms: vec![ExpTermDoc {
                poly: coeffs,
                freq: ScalarDoc::real(0.0),
            }],
        }
    }
}

impl<S: Scalar> Serialize for ExpPoly<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        ExpPolyDoc::from_exppoly(self).serialize(serializer)
    }
}
