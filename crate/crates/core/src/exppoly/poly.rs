use num_complex::Complex64;

use crate::scalar::Scalar;

/// Polynomial in `z`, coefficients in ascending powers.
///
/// The highest stored coefficient is nonzero; the zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Poly::from_coeffs(vec![c], 0.0)
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Poly {
            coeffs: vec![S::zero(), S::one()],
        }
    }

    pub fn monomial(c: S, degree: usize) -> Self {
        let mut coeffs = vec![S::zero(); degree];
        coeffs.push(c);
        Poly::from_coeffs(coeffs, 0.0)
    }

    /// Builds from ascending coefficients; entries zero under `tol` are
    /// cleared and trailing zeros trimmed.
    pub fn from_coeffs(coeffs: Vec<S>, tol: f64) -> Self {
        Poly { coeffs }.clean(tol)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn clean(mut self, tol: f64) -> Self {
        for c in self.coeffs.iter_mut() {
            if !c.is_zero() && c.is_zero_within(tol) {
                *c = S::zero();
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero_within(tol)) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &Poly<S>, tol: f64) -> Poly<S> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly::from_coeffs(coeffs, tol)
    }

    pub fn sub(&self, other: &Poly<S>, tol: f64) -> Poly<S> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Poly::from_coeffs(coeffs, tol)
    }

    pub fn neg(&self) -> Poly<S> {
        Poly {
            coeffs: self.coeffs.iter().cloned().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly<S>, tol: f64) -> Poly<S> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(coeffs, tol)
    }

    pub fn scale(&self, s: &S, tol: f64) -> Poly<S> {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * s.clone()).collect();
        Poly::from_coeffs(coeffs, tol)
    }

    pub fn derive(&self) -> Poly<S> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * S::from_i64(k as i64))
            .collect();
        Poly::from_coeffs(coeffs, 0.0)
    }

    pub fn derive_n(&self, k: usize) -> Poly<S> {
        (0..k).fold(self.clone(), |p, _| p.derive())
    }

    /// `P(z + c)` by Horner's scheme in the shifted variable.
    pub fn shift(&self, c: &S, tol: f64) -> Poly<S> {
        let linear = Poly {
            coeffs: vec![c.clone(), S::one()],
        };
        let mut acc = Poly::zero();
        for coef in self.coeffs.iter().rev() {
            acc = acc.mul(&linear, tol).add(&Poly::constant(coef.clone()), tol);
        }
        acc
    }

    pub fn eval(&self, z: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_c64())
    }

    /// Euclidean division; `None` if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly<S>, tol: f64) -> Option<(Poly<S>, Poly<S>)> {
        let lead_inv = divisor.leading()?.checked_inv(tol)?;
        let dd = divisor.degree()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![S::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = rem[rem.len() - 1].clone() * lead_inv.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - q.clone() * d.clone();
            }
            quot[k] = q;
            rem.pop();
        }
        Some((Poly::from_coeffs(quot, tol), Poly::from_coeffs(rem, tol)))
    }

    pub fn to_c64(&self) -> Poly<Complex64> {
        Poly {
            coeffs: self.coeffs.iter().map(Scalar::to_c64).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}
