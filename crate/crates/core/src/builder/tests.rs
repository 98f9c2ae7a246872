use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::random::mixed_draw;
use crate::scalar::Exact;

fn ex(s: &str) -> Exact {
    s.parse().unwrap()
}

fn ectx() -> Context<Exact> {
    Context::default()
}

fn fctx() -> Context<Complex64> {
    Context::default()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn case_i_small_example() {
    let fam = build_case_i(1, ex("pi*i"), 1, ex("2"), ex("3"), ex("2"), &ectx()).unwrap();
    let r = fam.r().unwrap();
    assert_eq!(r, ex("i/6"));
    assert_eq!(r, ex("-1") * ex("6*i").checked_inv(0.0).unwrap());
    assert_eq!(fam.form.a, ex("3"));
    assert_eq!(fam.rhs, ExpPoly::constant(ex("6")));
    let expected = ExpPoly::normalize(
        vec![
            ExpTerm::new(Poly::constant(ex("e^2")), ex("3")),
            ExpTerm::new(Poly::constant(ex("3/2 * e^-2")), ex("-3")),
        ],
        &Tolerance::default(),
    );
    assert_eq!(fam.f, expected);
    assert!(fam.report.passed());
    assert!(fam.side_condition("2iRa^k + 1 = 0").unwrap().residual.is_zero());
}

#[test]
fn case_i_plain_cosh() {
    let fam = build_case_i(1, ex("pi*i"), 0, ex("1"), ex("1"), ex("0"), &ectx()).unwrap();
    assert_eq!(fam.r().unwrap(), ex("i/2"));
    assert_eq!(fam.form.a, ex("1"));
    assert_eq!(fam.rhs, ExpPoly::one());
}

#[test]
fn case_i_higher_odd_k_is_exact() {
    for k in [3, 5] {
        for m in [-2, 0, 1] {
            let fam = build_case_i(k, ex("pi*i/2"), m, ex("1/3"), ex("-i"), ex("1"), &ectx()).unwrap();
            let sc = fam.side_condition("2iRa^k + 1 = 0").unwrap();
            assert!(sc.residual.is_zero(), "k={k} m={m}");
        }
    }
}

#[test]
fn case_i_even_k() {
    for k in [2, 4] {
        assert_eq!(
            build_case_i(k, ex("pi*i"), 1, ex("2"), ex("3"), ex("2"), &ectx()),
            Err(BuildError::EvenK { k })
        );
    }
}

#[test]
fn case_i_float_backend() {
    let fam = build_case_i(3, c(0.0, 2.5), 0, c(1.5, 0.0), c(0.0, 2.0), c(0.1, -0.2), &fctx()).unwrap();
    assert!(fam.report.sample_max_abs < 1e-8);
}

fn example_case_ii(alpha: &str, beta: &str, a: &str, c: &str) -> BuildResult<SolutionFamily<Exact>> {
    let q1 = Poly::from_coeffs(vec![ex("0"), ex(alpha)], 0.0);
    let q2 = Poly::from_coeffs(vec![ex("0"), ex(beta)], 0.0);
    build_case_ii(1, ex(a), ex(c), q1, q2, ex("1"), &ectx())
}

#[test]
fn case_ii_linear_factors() {
    let fam = example_case_ii("2", "5", "2", "pi*i").unwrap();
    // R = z/(iac)
    let expected_r = Poly::from_coeffs(vec![ex("0"), ex("2*pi*i*i").checked_inv(0.0).unwrap()], 0.0);
    match fam.op.kind() {
        crate::operators::OperatorKind::DiffDelta { r, .. } => assert_eq!(r, &expected_r),
        other => panic!("{other:?}"),
    }
    assert_eq!(
        fam.rhs,
        ExpPoly::from_poly(Poly::monomial(ex("10"), 2))
    );
    assert!(fam.report.passed());
    assert!(fam.side_condition("R·P(Q2) = Q2").unwrap().holds(0.0));
    assert!(!fam.side_condition("-R·P(Q2) = Q2").unwrap().holds(0.0));
    assert!(fam
        .side_condition("iR·Σ C(k,l)(-a)^(k-l)[Q2^(l)(z) - Q2^(l)(z+c)] = Q2")
        .unwrap()
        .holds(0.0));
}

#[test]
fn case_ii_with_declared_exponential() {
    // a·c = 4πi is builtin, but an explicit declaration must be accepted too
    let ctx = ectx().with_exp(ex("4*pi*i"), ex("1")).unwrap();
    let q1 = Poly::from_coeffs(vec![ex("1"), ex("3")], 0.0);
    // R = Q1/(3iac) is linear; the Q2 side then forces Q2 ∝ Q1
    let q2 = Poly::from_coeffs(vec![ex("-1/2"), ex("-3/2")], 0.0);
    let fam = build_case_ii(1, ex("4"), ex("pi*i"), q1.clone(), q2, ex("0"), &ctx).unwrap();
    assert!(fam.report.passed());
    let res = build_case_ii(1, ex("4"), ex("pi*i"), q1, Poly::z(), ex("0"), &ctx);
    assert!(matches!(res, Err(BuildError::ConsistencyFailure(_))));
}

#[test]
fn case_ii_quadratic_second_factor_fails() {
    let q1 = Poly::z();
    let q2 = Poly::monomial(ex("1"), 2);
    let res = build_case_ii(1, ex("1"), ex("2*pi*i"), q1, q2, ex("0"), &ectx());
    assert!(matches!(res, Err(BuildError::ConsistencyFailure(_))), "{res:?}");
}

#[test]
fn case_ii_constant_factor_rejected() {
    let res = build_case_ii(1, ex("1"), ex("2*pi*i"), Poly::one(), Poly::z(), ex("0"), &ectx());
    assert!(matches!(res, Err(BuildError::Precondition(_))));
}

#[test]
fn case_ii_requires_unit_multiplier() {
    let res = build_case_ii(1, ex("1"), ex("pi*i"), Poly::z(), Poly::z(), ex("0"), &ectx());
    assert!(matches!(res, Err(BuildError::Precondition(_))));
}

#[test]
fn case_ii_non_polynomial_quotient() {
    // P(z²) has degree one, and z² / (linear) leaves a remainder unless the
    // linear factor divides z²
    let q1 = Poly::from_coeffs(vec![ex("1"), ex("0"), ex("1")], 0.0);
    let res = build_case_ii(1, ex("1"), ex("2*pi*i"), q1, Poly::z(), ex("0"), &ectx());
    assert!(matches!(res, Err(BuildError::NonPolynomialQuotient(_))), "{res:?}");
}

#[test]
fn mixed_case_one_values() {
    let tol = 1e-12;
    let plus = build_mixed(2, 2, c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), Branch::Plus, &fctx()).unwrap();
    let minus = build_mixed(2, 2, c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), Branch::Minus, &fctx()).unwrap();
    assert_eq!(plus.case, "I");
    let r = plus.r().unwrap();
    assert!((r * r + 1.0 / 128.0).norm() < tol);
    let w = |fam: &SolutionFamily<Complex64>| {
        let c = *fam.op.shift();
        (c * 2.0).exp()
    };
    let root2 = 2f64.sqrt();
    assert!((w(&plus) - c(-3.0 + 2.0 * root2, 0.0)).norm() < tol);
    assert!((w(&minus) - c(-3.0 - 2.0 * root2, 0.0)).norm() < tol);
    assert!((w(&plus) * w(&minus) - 1.0).norm() < tol);
    assert!(plus.report.sample_max_abs < 1e-8 && minus.report.sample_max_abs < 1e-8);
}

#[test]
fn mixed_case_one_needs_float_for_surds() {
    let res = build_mixed(2, 2, ex("1"), ex("3"), ex("2"), ex("0"), Branch::Plus, &ectx());
    assert!(matches!(res, Err(BuildError::NotRepresentable(_))), "{res:?}");
}

#[test]
fn mixed_case_two_exact() {
    let fam = build_mixed(1, 3, ex("5"), ex("1"), ex("3"), ex("0"), Branch::Minus, &ectx()).unwrap();
    assert_eq!(fam.case, "II");
    let r = fam.r().unwrap();
    assert_eq!(r, ex("-i/12"));
    assert_eq!(r.clone() * r, ex("-1/144"));
    assert_eq!(fam.op.shift(), &ex("pi*i/3"));
    assert!(fam.report.passed());
    // the other branch pairs e^(ac) = 1 with R = -i/42
    let other = build_mixed(1, 3, ex("5"), ex("1"), ex("3"), ex("0"), Branch::Plus, &ectx()).unwrap();
    assert_eq!(other.r().unwrap(), ex("-i/42"));
    assert_eq!(other.op.shift(), &ex("2*pi*i/3"));
}

#[test]
fn mixed_case_three_exact() {
    let fam = build_mixed(2, 3, ex("1"), ex("3"), ex("1"), ex("2"), Branch::Plus, &ectx()).unwrap();
    assert_eq!(fam.case, "III");
    assert_eq!(fam.op.shift(), &ex("pi*i/2"));
    let r = fam.r().unwrap();
    assert_eq!(r.clone() * r, ex("-1") * ex("8 + 6*i").checked_inv(0.0).unwrap());
    assert!(fam.report.passed());
}

#[test]
fn mixed_case_four_values() {
    let p = mixed_parameters(1, 2, &ex("3"), &ex("2"), &ex("2"), Branch::Plus, 0.0).unwrap();
    assert_eq!(p.case, MixedCase::IV);
    assert_eq!(p.w, ex("1/3"));
    assert_eq!(p.r, ex("-i/10"));
    let q = mixed_parameters(1, 2, &ex("3"), &ex("2"), &ex("2"), Branch::Minus, 0.0).unwrap();
    assert_eq!(q.w, ex("-3"));

    let fam = build_mixed(1, 2, c(3.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(0.5, 0.0), Branch::Plus, &fctx()).unwrap();
    assert!((fam.r().unwrap() - c(0.0, -0.1)).norm() < 1e-12);
    assert!(((*fam.op.shift() * 2.0).exp() - c(1.0 / 3.0, 0.0)).norm() < 1e-12);
    assert!(fam.report.sample_max_abs < 1e-8);
}

#[test]
fn mixed_degenerate_parameters() {
    // α = β in case I
    let res = mixed_parameters(2, 2, &ex("3"), &ex("3"), &ex("2"), Branch::Plus, 0.0);
    assert!(matches!(res, Err(BuildError::DegenerateParameters { .. })));
    // β + α = 0 on the + branch of case II, fine on the - branch
    let res = mixed_parameters(1, 1, &ex("-1"), &ex("1"), &ex("2"), Branch::Plus, 0.0);
    assert!(matches!(res, Err(BuildError::DegenerateParameters { .. })));
    assert!(mixed_parameters(1, 1, &ex("-1"), &ex("1"), &ex("2"), Branch::Minus, 0.0).is_ok());
    // α = iβ in case IV
    let res = mixed_parameters(1, 0, &ex("i"), &ex("2"), &ex("2"), Branch::Plus, 0.0);
    assert!(matches!(res, Err(BuildError::DegenerateParameters { .. })));
}

#[test]
fn mixed_case_one_alternative_exclusion_set() {
    // α = i√3·β puts e^(ac) = β/α on the + branch
    let b = c(1.0, 0.0);
    let a_big = c(0.0, 3f64.sqrt());
    let fam = build_mixed(0, 0, a_big, b, c(1.0, 0.0), c(0.0, 0.0), Branch::Plus, &fctx()).unwrap();
    let alt = fam
        .exclusions_checked
        .iter()
        .find(|e| !e.binding)
        .unwrap();
    assert!(!alt.holds);
    assert!(fam.exclusions_checked.iter().filter(|e| e.binding).all(|e| e.holds));
    assert!(fam.report.passed());
}

#[test]
fn parity_dispatch() {
    for m in 1..=4u32 {
        for n in 1..=4u32 {
            let expected = match (m % 2, n % 2) {
                (0, 0) => MixedCase::I,
                (1, 1) => MixedCase::II,
                (0, 1) => MixedCase::III,
                _ => MixedCase::IV,
            };
            let p = mixed_parameters(m, n, &c(1.0, 0.0), &c(0.7, 0.2), &c(1.3, 0.4), Branch::Plus, 1e-9)
                .unwrap();
            assert_eq!(p.case, expected, "m={m} n={n}");
            assert_eq!(MixedCase::from_parity(m, n), expected);
        }
    }
}

#[test]
fn mixed_round_trip_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (m_even, n_even) in [(true, true), (false, false), (true, false), (false, true)] {
        let mut done = 0;
        while done < 100 {
            let d = mixed_draw(&mut rng, m_even, n_even);
            let branch = if done % 2 == 0 { Branch::Plus } else { Branch::Minus };
            let fam = match build_mixed(d.m, d.n, d.big_a, d.big_b, d.a, d.b, branch, &fctx()) {
                Err(BuildError::DegenerateParameters { .. }) => continue,
                other => other.unwrap_or_else(|e| panic!("{d:?}: {e}")),
            };
            assert!(fam.report.sample_max_abs < 1e-8, "{d:?}: {}", fam.report.sample_max_abs);
            for name in ["iR(a^m e^(ac) A + a^n B) = 1", "iR((-a)^m e^(-ac) A + (-a)^n B) = -1"] {
                let sc = fam.side_condition(name).unwrap();
                assert!(sc.residual.coeff(0).norm() < 1e-12, "{name}: {d:?}");
            }
            done += 1;
        }
    }
}

#[test]
fn ac_to_c_examples() {
    let tol = Tolerance::default();
    assert_eq!(ac_to_c(&ex("1"), &ex("1"), 1, &tol).unwrap(), ex("2*pi*i"));
    assert_eq!(ac_to_c(&ex("i"), &ex("1"), 0, &tol).unwrap(), ex("pi*i/2"));
    let w = c(-3.0 + 2.0 * 2f64.sqrt(), 0.0);
    let cc = ac_to_c(&w, &c(2.0, 0.0), 0, &tol).unwrap();
    assert!(((cc * 2.0).exp() - w).norm() < 1e-12);
    assert!((cc.re - (3.0 - 2.0 * 2f64.sqrt()).ln() / 2.0).abs() < 1e-15);
    assert!((cc.im - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert_eq!(ac_to_c(&ex("0"), &ex("1"), 0, &tol), Err(BuildError::ZeroW));
}

#[test]
fn shift_coefficients_first_order() {
    let tol = Tolerance::default();
    let a = solve_shift_coeffs(1, &ex("i"), &[], &tol).unwrap();
    assert_eq!(a, vec![ex("0"), ex("-1")]);
}

#[test]
fn shift_coefficients_unit_multiplier() {
    let tol = Tolerance::default();
    for w in ["1", "-1"] {
        for tau in 1..=3 {
            match solve_shift_coeffs(tau, &ex(w), &[], &tol) {
                Err(BuildError::Infeasible { rule, .. }) => assert_eq!(rule, "unit_multiplier"),
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn shift_coefficients_plain_difference_never_works() {
    let tol = Tolerance::default();
    let pins = [(0, ex("-1")), (1, ex("1"))];
    for w in ["i", "2", "1", "-1", "1 - i", "3/4 + 5*i", "e"] {
        match solve_shift_coeffs(1, &ex(w), &pins, &tol) {
            Err(BuildError::Infeasible { rule, detail }) => {
                assert_eq!(rule, "no_common_multiplier");
                assert!(detail.contains("-1/2 + (1/2)*i"), "{detail}");
            }
            other => panic!("{w}: {other:?}"),
        }
    }
    let fw = solve_shift_coeffs(1, &c(0.3, 0.8), &[(0, c(-1.0, 0.0)), (1, c(1.0, 0.0))], &tol);
    assert!(matches!(fw, Err(BuildError::Infeasible { rule: "no_common_multiplier", .. })));
}

#[test]
fn shift_coefficients_pins_and_leading() {
    let tol = Tolerance::default();
    assert_eq!(
        solve_shift_coeffs(2, &ex("i"), &[(2, ex("0"))], &tol),
        Err(BuildError::LeadingCoefficientZero)
    );
    // a_0, a_1 pinned leave a_2 over-determined by two equations
    let res = solve_shift_coeffs(2, &ex("2"), &[(0, ex("1")), (1, ex("1"))], &tol);
    assert!(matches!(res, Err(BuildError::Infeasible { rule: "pinned_contradiction", .. })));
}

#[test]
fn shift_coefficients_satisfy_both_equations() {
    let tol = Tolerance::default();
    for tau in 1..=4 {
        for w in ["2", "i/3", "1 + i", "e", "-2 + pi*i"] {
            let w = ex(w);
            match solve_shift_coeffs(tau, &w, &[], &tol) {
                Ok(a) => {
                    let (p, q) = shift_equation_residuals(&a, &w, 0.0).unwrap();
                    assert!(p.is_zero_within(0.0) && q.is_zero_within(0.0));
                    assert!(!a[tau].is_zero_within(0.0));
                }
                Err(BuildError::LeadingCoefficientZero) => {}
                Err(e) => panic!("tau={tau}: {e}"),
            }
        }
    }
}

#[test]
fn shift_family_verifies() {
    let fam = build_shift_family(ex("1"), ex("0"), ex("pi*i/2"), 1, &[], &ectx()).unwrap();
    assert!(fam.report.passed());
    let fam = build_shift_family(c(0.7, 0.1), c(0.2, 0.0), c(0.4, 1.1), 3, &[], &fctx()).unwrap();
    assert!(fam.report.sample_max_abs < 1e-8);
}

#[test]
fn sin_family_first_order() {
    let fam = build_sin_family(ex("pi*i"), 1, &[], &ectx()).unwrap();
    match fam.op.kind() {
        crate::operators::OperatorKind::LinearShift { coeffs, .. } => {
            assert_eq!(coeffs, &vec![ex("0"), ex("-1")])
        }
        other => panic!("{other:?}"),
    }
    assert!(fam.report.passed());
    // sin(z/2) = (e^(iz/2) - e^(-iz/2))/(2i) with c = πi gives a = 1/2
    assert_eq!(fam.form.a, ex("1/2"));
}

#[test]
fn sin_family_second_order() {
    let fam = build_sin_family(ex("pi*i"), 2, &[(2, ex("1"))], &ectx()).unwrap();
    match fam.op.kind() {
        crate::operators::OperatorKind::LinearShift { coeffs, .. } => {
            assert_eq!(coeffs, &vec![ex("1"), ex("-1"), ex("1")])
        }
        other => panic!("{other:?}"),
    }
    assert!(fam.report.passed());
    assert_eq!(
        build_sin_family(ex("pi*i"), 2, &[], &ectx()).unwrap_err(),
        BuildError::LeadingCoefficientZero
    );
}

#[test]
fn sin_family_pins() {
    assert_eq!(
        build_sin_family(ex("pi*i"), 1, &[(1, ex("0"))], &ectx()).unwrap_err(),
        BuildError::LeadingCoefficientZero
    );
    let fam = build_sin_family(ex("pi*i"), 3, &[], &ectx()).unwrap();
    match fam.op.kind() {
        crate::operators::OperatorKind::LinearShift { coeffs, .. } => {
            assert_eq!(coeffs, &vec![ex("0"), ex("0"), ex("0"), ex("1")])
        }
        other => panic!("{other:?}"),
    }
    let fam = build_sin_family(c(0.0, 2.0), 4, &[(4, c(2.0, 0.0))], &fctx()).unwrap();
    assert!(fam.report.sample_max_abs < 1e-8);
    let res = build_sin_family(ex("pi*i"), 2, &[(0, ex("1")), (2, ex("2"))], &ectx());
    assert!(matches!(res, Err(BuildError::Infeasible { .. })));
}

#[test]
fn family_json_shape() {
    let fam = build_case_i(1, ex("pi*i"), 1, ex("2"), ex("3"), ex("2"), &ectx()).unwrap();
    let v = serde_json::to_value(&fam).unwrap();
    assert_eq!(v["case"], "i");
    assert_eq!(v["op"]["kind"], "diff_delta");
    assert_eq!(v["report"]["symbolic_pass"], true);
    assert!(v["side_conditions"].as_array().unwrap().len() >= 2);
    assert_eq!(v["r_approx"][1].as_f64().unwrap(), 1.0 / 6.0);
}
