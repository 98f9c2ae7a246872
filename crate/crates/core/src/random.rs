//! Seeded generators of random exact instances, for property checks.

use num_rational::BigRational;
use num_complex::Complex64;
use rand::Rng;

use crate::exppoly::{ExpPoly, ExpTerm, Poly};
use crate::scalar::{Exact, Tolerance};

/// Random exponential polynomials with Gaussian-rational coefficients and
/// frequencies drawn from a fixed list.
#[derive(Clone, Debug)]
pub struct RandomExpPoly {
    pub max_terms: usize,
    pub max_degree: usize,
    pub max_numerator: i64,
    pub max_denominator: i64,
    pub freqs: Vec<Exact>,
}

impl Default for RandomExpPoly {
    /// Half-integer real frequencies in `[-2, 2]`, so that every shift by an
    /// integer multiple of `πi` has a known exponential.
    fn default() -> Self {
        RandomExpPoly {
            max_terms: 3,
            max_degree: 2,
            max_numerator: 9,
            max_denominator: 5,
            freqs: (-4..=4).map(|k| Exact::from_ratio_i64(k, 2)).collect(),
        }
    }
}

impl Exact {
    fn from_ratio_i64(n: i64, d: i64) -> Exact {
        Exact::from_rational(BigRational::new(n.into(), d.into()), BigRational::from_integer(0.into()))
    }
}

impl RandomExpPoly {
    fn rational<R: Rng>(&self, rng: &mut R) -> BigRational {
        let n = rng.gen_range(-self.max_numerator..=self.max_numerator);
        let d = rng.gen_range(1..=self.max_denominator);
        BigRational::new(n.into(), d.into())
    }

    pub fn gauss<R: Rng>(&self, rng: &mut R) -> Exact {
        Exact::from_rational(self.rational(rng), self.rational(rng))
    }

    pub fn nonzero_gauss<R: Rng>(&self, rng: &mut R) -> Exact {
        loop {
            let x = self.gauss(rng);
            if !num_traits::Zero::is_zero(&x) {
                return x;
            }
        }
    }

    pub fn poly<R: Rng>(&self, rng: &mut R) -> Poly<Exact> {
        let deg = rng.gen_range(0..=self.max_degree);
        Poly::from_coeffs((0..=deg).map(|_| self.gauss(rng)).collect(), 0.0)
    }

    pub fn nonzero_poly<R: Rng>(&self, rng: &mut R) -> Poly<Exact> {
        loop {
            let p = self.poly(rng);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A random, possibly denormalized, term list.
    pub fn raw_terms<R: Rng>(&self, rng: &mut R) -> Vec<ExpTerm<Exact>> {
        let n = rng.gen_range(0..=self.max_terms + 1);
        (0..n)
            .map(|_| {
                let freq = self.freqs[rng.gen_range(0..self.freqs.len())].clone();
                ExpTerm::new(self.poly(rng), freq)
            })
            .collect()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> ExpPoly<Exact> {
        let n = rng.gen_range(0..=self.max_terms);
        let terms = (0..n)
            .map(|_| {
                let freq = self.freqs[rng.gen_range(0..self.freqs.len())].clone();
                ExpTerm::new(self.nonzero_poly(rng), freq)
            })
            .collect();
        ExpPoly::normalize(terms, &Tolerance::default())
    }
}

/// Parameters `(m, n, A, B, a, b)` of a mixed delay family, float backend.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedDraw {
    pub m: u32,
    pub n: u32,
    pub big_a: Complex64,
    pub big_b: Complex64,
    pub a: Complex64,
    pub b: Complex64,
}

fn complex_in<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-hi..=hi), rng.gen_range(-hi..=hi));
        if z.norm() >= lo {
            return z;
        }
    }
}

/// A draw whose `(m, n)` parities are `(m_even, n_even)`. Magnitudes stay
/// moderate so that `f` remains well inside binary64 range on `|z| ≤ 3`.
pub fn mixed_draw<R: Rng>(rng: &mut R, m_even: bool, n_even: bool) -> MixedDraw {
    let pick = |rng: &mut R, even: bool| -> u32 {
        let k = rng.gen_range(0..=1u32);
        if even {
            2 * k + 2
        } else {
            2 * k + 1
        }
    };
    MixedDraw {
        m: pick(rng, m_even),
        n: pick(rng, n_even),
        big_a: complex_in(rng, 0.5, 2.0),
        big_b: complex_in(rng, 0.5, 2.0),
        a: complex_in(rng, 0.5, 1.0),
        b: complex_in(rng, 0.0, 0.5),
    }
}
