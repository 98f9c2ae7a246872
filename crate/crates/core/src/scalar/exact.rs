use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{parse, Backend, Scalar, ScalarError, ScalarValue};
use crate::dd::{self, Cdd, Dd};

/// `p/q + (r/s)·i` with arbitrary-precision integers.
pub type GaussRational = Complex<BigRational>;

/// Exponents of `pi` and `e` in one monomial.
type Monomial = (i32, i32);

/// Laurent polynomial in `pi` and `e` with Gaussian-rational coefficients.
/// No stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Laurent {
    terms: BTreeMap<Monomial, GaussRational>,
}

fn gq_is_zero(c: &GaussRational) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

fn gq_from_int(n: i64) -> GaussRational {
    Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
}

impl Laurent {
    fn zero() -> Self {
        Laurent::default()
    }

    fn constant(c: GaussRational) -> Self {
        Laurent::monomial((0, 0), c)
    }

    fn monomial(m: Monomial, c: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !gq_is_zero(&c) {
            terms.insert(m, c);
        }
        Laurent { terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&(0, 0))
                .is_some_and(|c| c.re.is_one() && c.im.is_zero())
    }

    fn single_term(&self) -> Option<(Monomial, &GaussRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c))
        } else {
            None
        }
    }

    /// The value if this is a constant (no symbol occurs).
    fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(Complex::new(BigRational::zero(), BigRational::zero())),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: GaussRational) {
        if gq_is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if gq_is_zero(existing) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    fn neg(&self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term((ma.0 + mb.0, ma.1 + mb.1), ca.clone() * cb.clone());
            }
        }
        out
    }

    fn scale(&self, s: &GaussRational) -> Laurent {
        if gq_is_zero(s) {
            return Laurent::zero();
        }
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.clone() * s.clone()))
                .collect(),
        }
    }

    fn shift(&self, by: Monomial) -> Laurent {
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| ((m.0 + by.0, m.1 + by.1), c.clone()))
                .collect(),
        }
    }

    fn min_exponents(&self) -> Monomial {
        let a = self.terms.keys().map(|m| m.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|m| m.1).min().unwrap_or(0);
        (a, b)
    }

    fn leading(&self) -> Option<(Monomial, &GaussRational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    fn conj(&self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    fn real_part(&self) -> Laurent {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, Complex::new(c.re.clone(), BigRational::zero()));
        }
        out
    }

    fn imag_part(&self) -> Laurent {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, Complex::new(c.im.clone(), BigRational::zero()));
        }
        out
    }

    /// Exact quotient `self / divisor` if it is again a Laurent polynomial.
    ///
    /// Lexicographic division by a single polynomial: after shifting both to
    /// ordinary polynomials, a nonzero remainder means non-divisibility.
    fn div_exact(&self, divisor: &Laurent) -> Option<Laurent> {
        if divisor.is_zero() {
            return None;
        }
        let (na, nb) = self.min_exponents();
        let (da, db) = divisor.min_exponents();
        let mut rem = self.shift((-na, -nb));
        let d = divisor.shift((-da, -db));
        let (dm, dc) = d.leading().map(|(m, c)| (m, c.clone()))?;
        let mut quot = Laurent::zero();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m, c.clone())) {
            if rm.0 < dm.0 || rm.1 < dm.1 {
                return None;
            }
            let qm = (rm.0 - dm.0, rm.1 - dm.1);
            let qc = rc / dc.clone();
            let step = Laurent::monomial(qm, qc.clone());
            rem = rem.add(&step.mul(&d).neg());
            quot.add_term(qm, qc);
        }
        Some(quot.shift((na - da, nb - db)))
    }

    fn eval(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), c) in &self.terms {
            let re = c.re.to_f64().unwrap_or(f64::NAN);
            let im = c.im.to_f64().unwrap_or(f64::NAN);
            let scale = std::f64::consts::PI.powi(*a) * std::f64::consts::E.powi(*b);
            acc += Complex64::new(re, im) * scale;
        }
        acc
    }
}

fn rational_dd(r: &BigRational) -> Dd {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    match BigRational::from_float(hi) {
        Some(h) => Dd { hi, lo: 0.0 } + Dd::new((r - h).to_f64().unwrap_or(0.0)),
        None => Dd::new(hi),
    }
}

fn dd_powi(x: Dd, n: i32) -> Dd {
    let p = (0..n.unsigned_abs()).fold(Dd::ONE, |acc, _| acc * x);
    if n < 0 {
        Dd::ONE / p
    } else {
        p
    }
}

impl Laurent {
    fn eval_dd(&self) -> Cdd {
        let mut acc = Cdd::ZERO;
        for ((a, b), c) in &self.terms {
            let scale = Cdd::real(dd_powi(dd::PI, *a) * dd_powi(dd::E, *b));
            acc = acc + Cdd::new(rational_dd(&c.re), rational_dd(&c.im)) * scale;
        }
        acc
    }
}

/// An element of Q(i)(π, e).
///
/// Stored as `num / den`. After normalization `den` is `1` or a
/// polynomial with at least two terms, no negative exponents and leading
/// coefficient `1`.
#[derive(Clone, Debug)]
pub struct Exact {
    num: Laurent,
    den: Laurent,
}

impl Exact {
    fn from_parts(num: Laurent, den: Laurent) -> Exact {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Exact::zero();
        }
        if let Some((m, c)) = den.single_term() {
            let inv = Complex::new(BigRational::one(), BigRational::zero()) / c.clone();
            return Exact {
                num: num.scale(&inv).shift((-m.0, -m.1)),
                den: Laurent::constant(gq_from_int(1)),
            };
        }
        if let Some(q) = num.div_exact(&den) {
            return Exact {
                num: q,
                den: Laurent::constant(gq_from_int(1)),
            };
        }
        let (a, b) = den.min_exponents();
        let den = den.shift((-a, -b));
        let num = num.shift((-a, -b));
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = Complex::new(BigRational::one(), BigRational::zero()) / lc;
        Exact {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_gauss(value: GaussRational) -> Exact {
        Exact {
            num: Laurent::constant(value),
            den: Laurent::constant(gq_from_int(1)),
        }
    }

    pub fn from_rational(re: BigRational, im: BigRational) -> Exact {
        Exact::from_gauss(Complex::new(re, im))
    }

    pub fn from_int(n: i64) -> Exact {
        Exact::from_gauss(gq_from_int(n))
    }

    /// The symbol π.
    pub fn pi_symbol() -> Exact {
        Exact {
            num: Laurent::monomial((1, 0), gq_from_int(1)),
            den: Laurent::constant(gq_from_int(1)),
        }
    }

    /// The symbol e (Euler's number).
    pub fn e_symbol() -> Exact {
        Exact {
            num: Laurent::monomial((0, 1), gq_from_int(1)),
            den: Laurent::constant(gq_from_int(1)),
        }
    }

    pub fn i() -> Exact {
        Exact::from_gauss(Complex::new(BigRational::zero(), BigRational::one()))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn powi(&self, n: i32) -> Option<Exact> {
        if n < 0 {
            return self.inv().map(|inv| inv.pow(n.unsigned_abs()));
        }
        Some(self.pow(n as u32))
    }

    pub fn inv(&self) -> Option<Exact> {
        if self.num.is_zero() {
            None
        } else {
            Some(Exact::from_parts(self.den.clone(), self.num.clone()))
        }
    }

    /// The value as a Gaussian rational if no symbol occurs.
    pub fn as_gauss(&self) -> Option<GaussRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_symbol_free(&self) -> bool {
        self.as_gauss().is_some()
    }

    pub fn conj(&self) -> Exact {
        Exact::from_parts(self.num.conj(), self.den.conj())
    }

    /// Real and imaginary parts, each a real element of Q(π, e).
    pub fn parts(&self) -> (Exact, Exact) {
        let (num, den) = self.with_real_denominator();
        let re = Exact::from_parts(num.real_part(), den.clone());
        let im = Exact::from_parts(num.imag_part(), den);
        (re, im)
    }

    fn with_real_denominator(&self) -> (Laurent, Laurent) {
        if self.den.is_real() {
            (self.num.clone(), self.den.clone())
        } else {
            let c = self.den.conj();
            (self.num.mul(&c), self.den.mul(&c))
        }
    }

    /// Text form of a real value; `None` if the value is not real.
    pub fn real_string(&self) -> Option<String> {
        let (num, den) = self.with_real_denominator();
        if !num.is_real() {
            return None;
        }
        let n = fmt_real_laurent(&num);
        if den.is_one() {
            Some(n)
        } else {
            Some(format!("({})/({})", n, fmt_real_laurent(&den)))
        }
    }

    /// (re, im) as text, in the syntax accepted by [`Exact::from_str`].
    pub fn to_strings(&self) -> (String, String) {
        let (re, im) = self.parts();
        (
            re.real_string().expect("real part"),
            im.real_string().expect("imaginary part"),
        )
    }

    /// Builds `re + i·im` from two textual parts.
    pub fn from_strings(re: &str, im: &str) -> Result<Exact, ScalarError> {
        let re: Exact = re.parse()?;
        let im: Exact = im.parse()?;
        Ok(re + im * Exact::i())
    }

    pub fn is_zero_value(&self) -> bool {
        self.num.is_zero()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_monomial(m: Monomial) -> String {
    let mut parts = Vec::new();
    match m.0 {
        0 => {}
        1 => parts.push("pi".to_string()),
        k => parts.push(format!("pi^{k}")),
    }
    match m.1 {
        0 => {}
        1 => parts.push("e".to_string()),
        k => parts.push(format!("e^{k}")),
    }
    parts.join("*")
}

fn fmt_real_laurent(p: &Laurent) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms.iter().enumerate() {
        let r = &c.re;
        let negative = r.is_negative();
        let abs = r.abs();
        let body = if *m == (0, 0) {
            fmt_rational(&abs)
        } else if abs.is_one() {
            fmt_monomial(*m)
        } else {
            format!("{}*{}", fmt_rational(&abs), fmt_monomial(*m))
        };
        match (idx, negative) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_strings();
        if im == "0" {
            f.write_str(&re)
        } else if re == "0" {
            write!(f, "({im})*i")
        } else {
            write!(f, "{re} + ({im})*i")
        }
    }
}

impl FromStr for Exact {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_exact(s)
    }
}

impl PartialEq for Exact {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Zero for Exact {
    fn zero() -> Self {
        Exact {
            num: Laurent::zero(),
            den: Laurent::constant(gq_from_int(1)),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Exact {
    fn one() -> Self {
        Exact::from_int(1)
    }
}

impl Add for Exact {
    type Output = Exact;

    fn add(self, rhs: Exact) -> Exact {
        if self.den == rhs.den {
            if self.den.is_one() {
                return Exact {
                    num: self.num.add(&rhs.num),
                    den: self.den,
                };
            }
            return Exact::from_parts(self.num.add(&rhs.num), self.den);
        }
        Exact::from_parts(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for Exact {
    type Output = Exact;

    fn sub(self, rhs: Exact) -> Exact {
        self + (-rhs)
    }
}

impl Neg for Exact {
    type Output = Exact;

    fn neg(self) -> Exact {
        Exact {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Mul for Exact {
    type Output = Exact;

    fn mul(self, rhs: Exact) -> Exact {
        if self.den.is_one() && rhs.den.is_one() {
            return Exact {
                num: self.num.mul(&rhs.num),
                den: self.den,
            };
        }
        Exact::from_parts(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for Exact {
    type Output = Exact;

    /// Panics on division by zero; use [`Scalar::checked_div`] otherwise.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Exact) -> Exact {
        self * rhs.inv().expect("division by zero")
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Principal square root of a Gaussian rational when it is again one.
fn gauss_sqrt(z: &GaussRational) -> Option<GaussRational> {
    let modulus = rational_sqrt(&(z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()))?;
    let two = BigRational::from_integer(2.into());
    let x = rational_sqrt(&((modulus.clone() + z.re.clone()) / two.clone()))?;
    let y_abs = rational_sqrt(&((modulus - z.re.clone()) / two))?;
    let y = if z.im.is_negative() { -y_abs } else { y_abs };
    Some(Complex::new(x, y))
}

/// Best rational approximation with bounded denominator (continued fractions).
fn snap_rational(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let sign = if x < 0.0 { -1i64 } else { 1 };
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(BigRational::new(
        BigInt::from(p1) * sign,
        BigInt::from(q1),
    ))
}

impl Scalar for Exact {
    const BACKEND: Backend = Backend::Exact;

    fn is_zero_within(&self, _tol: f64) -> bool {
        self.num.is_zero()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn checked_inv(&self, _tol: f64) -> Option<Self> {
        self.inv()
    }

    fn from_i64(n: i64) -> Self {
        Exact::from_int(n)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Exact::from_rational(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    fn imag_unit() -> Self {
        Exact::i()
    }

    fn pi() -> Self {
        Exact::pi_symbol()
    }

    fn to_c64(&self) -> Complex64 {
        self.num.eval() / self.den.eval()
    }

    fn to_cdd(&self) -> Cdd {
        let n = self.num.eval_dd();
        if self.den.is_one() {
            n
        } else {
            n * self.den.eval_dd().inv()
        }
    }

    /// Known exactly: `exp(n + q·π·i) = eⁿ · i^(2q)` for integer `n` and
    /// `2q` integer.
    fn exp_builtin(&self) -> Option<Self> {
        if !self.den.is_one() {
            return None;
        }
        let mut real_int = BigInt::zero();
        let mut half_turns = BigInt::zero();
        for (m, c) in &self.num.terms {
            match m {
                (0, 0) if c.im.is_zero() && c.re.is_integer() => real_int = c.re.to_integer(),
                (1, 0) if c.re.is_zero() => {
                    let twice = c.im.clone() * BigRational::from_integer(2.into());
                    if !twice.is_integer() {
                        return None;
                    }
                    half_turns = twice.to_integer();
                }
                _ => return None,
            }
        }
        let n = real_int.to_i32()?;
        let unit = match half_turns.mod_floor(&BigInt::from(4)).to_u8()? {
            0 => gq_from_int(1),
            1 => Complex::new(BigRational::zero(), BigRational::one()),
            2 => gq_from_int(-1),
            _ => Complex::new(BigRational::zero(), -BigRational::one()),
        };
        Some(Exact {
            num: Laurent::monomial((0, n), unit),
            den: Laurent::constant(gq_from_int(1)),
        })
    }

    fn ln_builtin(&self) -> Option<Self> {
        if !self.den.is_one() {
            return None;
        }
        let (m, c) = self.num.single_term()?;
        if m.0 != 0 {
            return None;
        }
        let half = BigRational::new(1.into(), 2.into());
        let turn = if c.re.is_one() && c.im.is_zero() {
            BigRational::zero()
        } else if (-c.re.clone()).is_one() && c.im.is_zero() {
            BigRational::one()
        } else if c.re.is_zero() && c.im.is_one() {
            half
        } else if c.re.is_zero() && (-c.im.clone()).is_one() {
            -half
        } else {
            return None;
        };
        let mut num = Laurent::constant(gq_from_int(m.1 as i64));
        num.add_term((1, 0), Complex::new(BigRational::zero(), turn));
        Some(Exact {
            num,
            den: Laurent::constant(gq_from_int(1)),
        })
    }

    fn sqrt_builtin(&self) -> Option<Self> {
        if !self.den.is_one() {
            return None;
        }
        if self.num.is_zero() {
            return Some(Exact::zero());
        }
        let (m, c) = self.num.single_term()?;
        if m.0 % 2 != 0 || m.1 % 2 != 0 {
            return None;
        }
        let root = gauss_sqrt(c)?;
        Some(Exact {
            num: Laurent::monomial((m.0 / 2, m.1 / 2), root),
            den: Laurent::constant(gq_from_int(1)),
        })
    }

    fn from_c64_snapped(value: Complex64, max_den: u64, tol: f64) -> Option<Self> {
        let re = snap_rational(value.re, max_den)?;
        let im = snap_rational(value.im, max_den)?;
        let snapped = Exact::from_rational(re, im);
        if (snapped.to_c64() - value).norm() <= tol {
            Some(snapped)
        } else {
            None
        }
    }

    fn to_value(&self) -> ScalarValue {
        ScalarValue::Exact(self.clone())
    }

    fn from_value(value: &ScalarValue) -> Result<Self, ScalarError> {
        match value {
            ScalarValue::Exact(x) => Ok(x.clone()),
            ScalarValue::Float(_) => Err(ScalarError::BackendMismatch {
                left: Backend::Exact,
                right: Backend::Float,
            }),
        }
    }
}
