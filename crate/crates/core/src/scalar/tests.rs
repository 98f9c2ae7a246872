use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn ex(s: &str) -> Exact {
    s.parse().unwrap()
}

fn gauss(re: (i64, i64), im: (i64, i64)) -> Exact {
    Exact::from_rational(
        BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
        BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
    )
}

#[test]
fn componentwise_addition() {
    assert_eq!(ex("1 + 2*i") + ex("3 - i"), ex("4 + i"));
    let sum = ScalarValue::Float(Complex64::new(1.0, 2.0))
        .add(&ScalarValue::Float(Complex64::new(3.0, -1.0)))
        .unwrap();
    assert_eq!(sum, ScalarValue::Float(Complex64::new(4.0, 1.0)));
}

#[test]
fn reciprocal_of_example_constant() {
    // -1/(6i) = i/6, so its reciprocal is 6/i = -6i.
    let r = ex("-1/(6*i)");
    assert_eq!(r, ex("i/6"));
    assert_eq!(r.checked_inv(0.0).unwrap(), ex("-6*i"));
    let v = ScalarValue::Exact(r).inv(Tolerance::DEFAULT_ZERO).unwrap();
    assert_eq!(v, ScalarValue::Exact(ex("-6*i")));
}

#[test]
fn product_of_case_one_branches_is_one() {
    // e^{2c} = -3 ± 2√2 for a = 2, A = 1, B = 3: the two roots multiply to 1.
    let s = 2f64.sqrt();
    let p = Complex64::new(-3.0 + 2.0 * s, 0.0) * Complex64::new(-3.0 - 2.0 * s, 0.0);
    assert!((p - Complex64::one()).norm() < 1e-14);
}

#[test]
fn mixing_backends_is_an_error() {
    let a = ScalarValue::Exact(Exact::one());
    let b = ScalarValue::Float(Complex64::one());
    assert!(matches!(
        a.add(&b),
        Err(ScalarError::BackendMismatch { .. })
    ));
    assert!(matches!(
        a.mul(&b),
        Err(ScalarError::BackendMismatch { .. })
    ));
    assert!(Complex64::from_value(&a).is_err());
    assert!(Exact::from_value(&b).is_err());
}

#[test]
fn inverse_of_zero() {
    assert_eq!(
        ScalarValue::Exact(Exact::zero()).inv(1e-9),
        Err(ScalarError::DivisionByZero)
    );
    // Float zero test routes through the tolerance.
    let tiny = ScalarValue::Float(Complex64::new(1e-12, 0.0));
    assert_eq!(tiny.inv(1e-9), Err(ScalarError::DivisionByZero));
    assert!(tiny.inv(1e-15).is_ok());
}

#[test]
fn tagged_json_round_trip() {
    let v = ScalarValue::Exact(ex("3/4 - 2*pi*i"));
    let json = serde_json::to_string(&v).unwrap();
    assert_eq!(json, r#"{"re":"3/4","im":"-2*pi","backend":"exact"}"#);
    let back: ScalarValue = serde_json::from_str(&json).unwrap();
    assert_eq!(back, v);

    let f = ScalarValue::Float(Complex64::new(0.5, -1.25));
    let json = serde_json::to_string(&f).unwrap();
    assert_eq!(json, r#"{"re":0.5,"im":-1.25,"backend":"float"}"#);
    assert_eq!(serde_json::from_str::<ScalarValue>(&json).unwrap(), f);
}

#[test]
fn doc_resolution_defaults_and_mismatch() {
    let doc: ScalarDoc = serde_json::from_str(r#"{"re":"pi"}"#).unwrap();
    let x = doc.to_scalar::<Complex64>().unwrap();
    assert!((x.re - std::f64::consts::PI).abs() < 1e-15);
    let doc: ScalarDoc = serde_json::from_str(r#"{"re":1,"backend":"float"}"#).unwrap();
    assert!(doc.to_scalar::<Exact>().is_err());
    let doc: ScalarDoc = serde_json::from_str(r#"{"re":0.25,"im":"1/3"}"#).unwrap();
    assert_eq!(doc.to_scalar::<Exact>().unwrap(), ex("1/4 + i/3"));
}

fn random_gauss(rng: &mut ChaCha8Rng) -> Exact {
    let mut part = || {
        let den = rng.gen_range(1..=12i64);
        (rng.gen_range(-10 * den..=10 * den), den)
    };
    gauss(part(), part())
}

#[test]
fn exact_field_axioms_on_random_gaussian_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let x = random_gauss(&mut rng);
        let y = random_gauss(&mut rng);
        let z = random_gauss(&mut rng);
        assert_eq!(
            (x.clone() * y.clone()) * z.clone(),
            x.clone() * (y.clone() * z.clone())
        );
        assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z);
        if !x.is_zero() {
            assert_eq!(x.clone() * x.checked_inv(0.0).unwrap(), Exact::one());
        }
    }
}

#[derive(Clone, Debug)]
enum Expr {
    Leaf(Exact),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return Expr::Leaf(random_gauss(rng));
    }
    let a = Box::new(random_expr(rng, depth - 1));
    let b = Box::new(random_expr(rng, depth - 1));
    match rng.gen_range(0..4) {
        0 => Expr::Add(a, b),
        1 => Expr::Sub(a, b),
        2 => Expr::Mul(a, b),
        _ => Expr::Div(a, b),
    }
}

fn eval_both(e: &Expr) -> Option<(Exact, Complex64)> {
    Some(match e {
        Expr::Leaf(x) => (x.clone(), x.to_c64()),
        Expr::Add(a, b) => {
            let (xa, fa) = eval_both(a)?;
            let (xb, fb) = eval_both(b)?;
            (xa + xb, fa + fb)
        }
        Expr::Sub(a, b) => {
            let (xa, fa) = eval_both(a)?;
            let (xb, fb) = eval_both(b)?;
            (xa - xb, fa - fb)
        }
        Expr::Mul(a, b) => {
            let (xa, fa) = eval_both(a)?;
            let (xb, fb) = eval_both(b)?;
            (xa * xb, fa * fb)
        }
        Expr::Div(a, b) => {
            let (xa, fa) = eval_both(a)?;
            let (xb, fb) = eval_both(b)?;
            if xb.to_c64().norm() < 1e-3 {
                return None;
            }
            (xa * xb.checked_inv(0.0)?, fa / fb)
        }
    })
}

#[test]
fn float_backend_tracks_exact_backend() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 300 {
        let e = random_expr(&mut rng, 8);
        let Some((exact, float)) = eval_both(&e) else {
            continue;
        };
        let reference = exact.to_c64();
        let scale = reference.norm().max(1.0);
        assert!(
            (reference - float).norm() / scale < 1e-12,
            "{e:?}: {reference} vs {float}"
        );
        checked += 1;
    }
}

proptest! {
    #[test]
    fn exact_text_round_trip(re_n in -500i64..500, re_d in 1i64..50, im_n in -500i64..500,
                             im_d in 1i64..50, pi_pow in -2i32..3, e_pow in -2i32..3) {
        let x = gauss((re_n, re_d), (im_n, im_d))
            * Exact::pi_symbol().powi(pi_pow).unwrap()
            * Exact::e_symbol().powi(e_pow).unwrap()
            + gauss((1, 3), (0, 1));
        let (re, im) = x.to_strings();
        prop_assert_eq!(Exact::from_strings(&re, &im).unwrap(), x);
    }
}
