mod common;

use num_rational::BigRational;
use posethopf::algebra::{
    determinant, foissy_series, qbinom, series_compose, solve_linear_exact, LinearSolution, PowerSeries, Scalar,
    ScalarRatio, Var,
};
use posethopf::Error;
use proptest::prelude::*;

use common::{binom, rational, scalar};

fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

#[test]
fn display_is_graded_lex() {
    assert_eq!(s("t0*t1 + 3*t0^2").to_string(), "3*t0^2 + t0*t1");
    assert_eq!(s("t1^3 + t0*t1^2 - 2*t0^2*t1").to_string(), "-2*t0^2*t1 + t0*t1^2 + t1^3");
    assert_eq!(s("1 + q + q^2").to_string(), "q^2 + q + 1");
    assert_eq!(s("-1/2*t").to_string(), "-1/2*t");
    assert_eq!(Scalar::zero().to_string(), "0");
}

#[test]
fn parser_handles_products_powers_and_parentheses() {
    assert_eq!(s("(t0 + t1)^2"), s("t0^2 + 2*t0*t1 + t1^2"));
    assert_eq!(s("2/4*(q - 1)*(q + 1)"), s("1/2*q^2 - 1/2"));
    assert_eq!(s("-(s0)"), -Scalar::var(Var::S(0)));
    assert!(matches!("t9".parse::<Scalar>(), Err(Error::Parse(_))));
    assert!(matches!("1/0".parse::<Scalar>(), Err(Error::Parse(_))));
    assert!(matches!("t0 +".parse::<Scalar>(), Err(Error::Parse(_))));
    assert!(matches!("0.5".parse::<Scalar>(), Err(Error::Parse(_))));
}

#[test]
fn exact_division() {
    let a = s("t0^2 - t1^2");
    assert_eq!(a.exact_div(&s("t0 + t1")).unwrap(), s("t0 - t1"));
    assert!(matches!(a.exact_div(&s("t0 + 2*t1")), Err(Error::InexactDivision)));
    assert!(s("1").exact_div(&Scalar::zero()).is_err());
}

#[test]
fn ratios_compare_by_cross_multiplication() {
    let a = ScalarRatio::new(s("t0^2 - t1^2"), s("t0 - t1")).unwrap();
    assert_eq!(a.to_scalar(), Some(s("t0 + t1")));
    let b = ScalarRatio::new(s("2*q"), s("4*q + 2")).unwrap();
    let c = ScalarRatio::new(s("q"), s("2*q + 1")).unwrap();
    assert_eq!(b, c);
    assert!(ScalarRatio::new(s("1"), Scalar::zero()).is_err());
}

#[test]
fn qbinom_values() {
    assert_eq!(qbinom(4, 2), s("q^4 + q^3 + 2*q^2 + q + 1"));
    assert_eq!(qbinom(5, 0), Scalar::one());
    assert_eq!(qbinom(3, 5), Scalar::zero());
    for n in 0..=8 {
        for k in 0..=n {
            assert_eq!(qbinom(n, k), qbinom(n, n - k));
            let at_one = qbinom(n, k).substitute(Var::Q, &Scalar::one());
            assert_eq!(at_one, Scalar::from(binom(n, k) as i64));
            if k > 0 && k < n {
                // q-Pascal rule
                let rhs = qbinom(n - 1, k - 1) + Scalar::q().pow(k as u32) * qbinom(n - 1, k);
                assert_eq!(qbinom(n, k), rhs);
            }
        }
    }
}

#[test]
fn linear_solver_unique_solution() {
    // [[t0, 1], [1, t1]] x = [1, 0]
    let a = vec![vec![s("t0"), s("1")], vec![s("1"), s("t1")]];
    let b = vec![s("1"), s("0")];
    let LinearSolution::Unique(x) = solve_linear_exact(&a, &b).unwrap() else { panic!("not unique") };
    let det = s("t0*t1 - 1");
    assert_eq!(x[0], ScalarRatio::new(s("t1"), det.clone()).unwrap());
    assert_eq!(x[1], ScalarRatio::new(s("-1"), det).unwrap());
}

#[test]
fn linear_solver_overdetermined_and_inconsistent() {
    let a = vec![vec![s("1")], vec![s("q")], vec![s("q^2")]];
    let b = vec![s("q + 1"), s("q^2 + q"), s("q^3 + q^2")];
    assert_eq!(solve_linear_exact(&a, &b).unwrap(), LinearSolution::Unique(vec![ScalarRatio::from_scalar(s("q + 1"))]));
    let b = vec![s("q + 1"), s("q^2 + q"), s("q^3")];
    assert_eq!(solve_linear_exact(&a, &b).unwrap(), LinearSolution::Inconsistent { row: 2 });
}

#[test]
fn linear_solver_rank_deficient() {
    let a = vec![vec![s("1"), s("1")], vec![s("2"), s("2")]];
    let b = vec![s("t0"), s("2*t0")];
    match solve_linear_exact(&a, &b).unwrap() {
        LinearSolution::Underdetermined { rank, particular } => {
            assert_eq!(rank, 1);
            let sum = particular[0].add(&particular[1]);
            assert_eq!(sum, ScalarRatio::from_scalar(s("t0")));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(solve_linear_exact(&a, &b[..1]), Err(Error::SizeMismatch(_))));
}

#[test]
fn determinant_of_vandermonde() {
    let m: Vec<Vec<Scalar>> = ["t0", "t1", "t2"].iter().map(|x| (0..3).map(|k| s(x).pow(k)).collect()).collect();
    let expected = s("(t1 - t0)*(t2 - t0)*(t2 - t1)");
    assert_eq!(determinant(&m).unwrap(), expected);
}

#[test]
fn foissy_series_special_cases() {
    let one = foissy_series(&rational(0, 1), &rational(1, 1), 4);
    assert_eq!(one.coeffs, vec![Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
    let exp = foissy_series(&rational(1, 1), &rational(0, 1), 5);
    let expected: Vec<Scalar> = [1, 1, 2, 6, 24].iter().map(|&d| scalar(1, d)).collect();
    assert_eq!(exp.coeffs, expected);
    let geo = foissy_series(&rational(1, 1), &rational(1, 1), 5);
    assert!(geo.coeffs.iter().all(Scalar::is_one));
    let sqrt = foissy_series(&rational(1, 1), &rational(-2, 1), 4);
    // (1 + 2x)^(1/2) = 1 + x - x^2/2 + x^3/2
    let expected = vec![scalar(1, 1), scalar(1, 1), scalar(-1, 2), scalar(1, 2)];
    assert_eq!(sqrt.coeffs, expected);
}

#[test]
fn composition_needs_zero_constant_term() {
    let f = PowerSeries::new(vec![Scalar::one(), Scalar::one(), Scalar::one()]);
    let g = PowerSeries::new(vec![Scalar::one(), Scalar::one()]);
    assert!(matches!(series_compose(&f, &g, 3), Err(Error::NonzeroConstantTerm)));
    // 1/(1 - u) after u = x + x^2 is 1 + x + 2x^2 + 3x^3 + ...
    let g = PowerSeries::new(vec![Scalar::zero(), Scalar::one(), Scalar::one()]);
    let f = PowerSeries::new(vec![Scalar::one(); 5]);
    let h = series_compose(&f, &g, 5).unwrap();
    let expected: Vec<Scalar> = [1, 1, 2, 3, 5].iter().map(|&c| Scalar::from(c)).collect();
    assert_eq!(h.coeffs, expected);
}

fn small_scalar() -> impl Strategy<Value = Scalar> {
    let term = (-5i64..=5, 1i64..=3, 0u32..=2, 0u32..=2, 0u32..=1)
        .prop_map(|(n, d, a, b, c)| scalar(n, d) * Scalar::t(0).pow(a) * Scalar::t(1).pow(b) * Scalar::q().pow(c));
    proptest::collection::vec(term, 0..4).prop_map(|v| v.into_iter().sum())
}

proptest! {
    #[test]
    fn ring_axioms(a in small_scalar(), b in small_scalar(), c in small_scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn display_parse_round_trip(a in small_scalar()) {
        let back: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn division_undoes_multiplication(a in small_scalar(), b in small_scalar()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in small_scalar(), b in small_scalar(), x in -4i64..4, y in -4i64..4) {
        let at = [(Var::T(0), BigRational::from_integer(x.into())),
                  (Var::T(1), BigRational::from_integer(y.into())),
                  (Var::Q, rational(1, 3))];
        let ab = (&a * &b).eval(&at).unwrap();
        prop_assert_eq!(ab, a.eval(&at).unwrap() * b.eval(&at).unwrap());
    }
}
