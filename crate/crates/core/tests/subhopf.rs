mod common;

use posethopf::algebra::{PowerSeries, ScalarRatio, Var};
use posethopf::counting::partitions;
use posethopf::growth::{grow_distribution, presets, solve_growth, Couplings, GrowthRule, Normalization};
use posethopf::hopf::{coproduct_vector, PosetVector};
use posethopf::poset::enumerate;
use posethopf::subhopf::{
    beta_variant, check_closure, corollas, f_n, first_order_beta, gamma_formula, tp_beta, BetaVariant,
    ClosureReportJson, ClosureStatus, ForestBetas,
};
use posethopf::{Error, Poset, Scalar};

use common::scalar;

fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

fn csg_series(rule: &GrowthRule, n_max: usize) -> Vec<PosetVector> {
    let mut out = vec![PosetVector::zero()];
    for n in 1..=n_max {
        out.push(grow_distribution(n, rule, None).unwrap());
    }
    out
}

fn forest_series(n_max: usize) -> Vec<PosetVector> {
    csg_series(&GrowthRule::Csg(presets::forest(None).unwrap()), n_max)
}

/// Every forest whose trees have the sizes in `k`.
fn forests_with_sizes(k: &[usize]) -> Vec<Poset> {
    let mut want = k.to_vec();
    want.sort_unstable();
    enumerate(k.iter().sum())
        .unwrap()
        .iter()
        .filter(|p| {
            let mut sizes: Vec<usize> = p.components().iter().map(Poset::len).collect();
            sizes.sort_unstable();
            p.is_forest() && sizes == want
        })
        .cloned()
        .collect()
}

fn ratio(x: Scalar) -> ScalarRatio {
    ScalarRatio::from_scalar(x)
}

#[test]
fn forest_model_is_closed_with_recursive_betas() {
    let report = check_closure(&forest_series(5), 5).unwrap();
    assert_eq!(report.status, ClosureStatus::Closed);
    assert_eq!(report.checked_n, 5);
    let mut fb = ForestBetas::new();
    for total in 2..=5 {
        for l in 1..total {
            for k in partitions(total - l) {
                let got = report.beta(&k, l).unwrap();
                assert_eq!(*got, ratio(fb.beta(&k, l).unwrap()), "{k:?} {l}");
                if k.len() == 1 {
                    assert_eq!(*got, ratio(first_order_beta(k[0], l)));
                }
                for w in forests_with_sizes(&k) {
                    assert_eq!(*got, ratio(fb.beta_with_witness(&k, l, &w).unwrap()), "{k:?} {l} {w}");
                }
            }
        }
    }
    // the right-hand side is always a single generator
    for ((_, r), c) in &report.betas {
        if r.len() > 1 {
            assert!(c.is_zero());
        }
    }
}

#[test]
fn forest_beta_table_rows() {
    let mut fb = ForestBetas::new();
    assert_eq!(first_order_beta(1, 1), s("2*t0 + t1"));
    assert_eq!(fb.beta(&[1, 1], 1).unwrap(), s("t1^2 + 2*t0*t1"));
    assert_eq!(fb.beta(&[2, 1], 1).unwrap(), s("7*t0*t1 + 3*t1^2"));
    assert_eq!(fb.beta(&[1, 1], 2).unwrap(), s("7*t1^2 + 8*t0*t1"));
    assert_eq!(fb.beta(&[1, 1, 1], 1).unwrap(), s("t1^3 - 2*t0^2*t1 + t0*t1^2"));
    assert!(matches!(fb.beta(&[2, 0], 1), Err(Error::DomainError(_))));
    assert!(matches!(fb.beta_with_witness(&[2, 1], 1, &Poset::chain(3).unwrap()), Err(Error::SizeMismatch(_))));
    assert!(matches!(fb.beta_with_witness(&[3], 1, &"3:1-3,2-3".parse().unwrap()), Err(Error::NotAForest)));
}

#[test]
fn witness_forests_share_f_n() {
    for total in 2..=6 {
        for k in partitions(total) {
            let forests = forests_with_sizes(&k);
            for n in partitions(total) {
                let values: Vec<_> = forests.iter().map(|f| f_n(&n, f).unwrap()).collect();
                assert!(values.windows(2).all(|w| w[0] == w[1]), "{k:?} {n:?}");
            }
        }
    }
    assert_eq!(corollas(&[3, 1]).unwrap(), "4:1-2,1-3".parse().unwrap());
}

#[test]
fn beta_variants() {
    let b = first_order_beta(1, 1);
    assert_eq!(beta_variant(&b, &[1], 1, BetaVariant::Tree).unwrap(), ratio(s("t1")));
    assert_eq!(beta_variant(&b, &[1], 1, BetaVariant::Cm).unwrap(), ratio(s("1")));
    // a2 / (t0 + t1): β' = β / (t0 + t1)
    let nf = beta_variant(&b, &[1], 1, BetaVariant::NormalisedForest).unwrap();
    assert_eq!(nf, ScalarRatio::new(s("2 + t"), s("1 + t")).unwrap());
    let nt = beta_variant(&first_order_beta(2, 1), &[2], 1, BetaVariant::NormalisedTree).unwrap();
    assert_eq!(nt.to_scalar(), Some(scalar(1, 2)));
    for k in 1..=5usize {
        for l in 1..=6 - k {
            let b = first_order_beta(k, l);
            let one_plus = |x: usize| Scalar::one() + Scalar::from(x as i64) * Scalar::var(Var::Ratio);
            let sum: Scalar =
                (1..=l + 1).map(|i| Scalar::from(common::binom(l + k - i, l + 1 - i) as i64) * one_plus(i - 1)).sum();
            let num: Scalar = (1..k).map(one_plus).product();
            let den: Scalar = (l..l + k).map(one_plus).product();
            let expected = ScalarRatio::new(num * sum, den).unwrap();
            assert_eq!(beta_variant(&b, &[k], l, BetaVariant::NormalisedForest).unwrap(), expected, "{k} {l}");
            let tree: i64 = (1..=l + 1).map(|i| common::binom(l + k - i, l + 1 - i) as i64 * (i as i64 - 1)).sum();
            let f = |m: usize| common::factorial(m) as i64;
            let expected = scalar(f(k - 1) * f(l - 1) * tree, f(k + l - 1));
            let got = beta_variant(&b, &[k], l, BetaVariant::NormalisedTree).unwrap();
            assert_eq!(got.to_scalar(), Some(expected), "{k} {l}");
        }
    }
}

#[test]
fn transitive_percolation_gives_q_binomials() {
    let series = csg_series(&presets::tp(None).unwrap(), 5);
    let report = check_closure(&series, 5).unwrap();
    assert_eq!(report.status, ClosureStatus::Closed);
    for ((k, r), c) in &report.betas {
        let l: usize = r.iter().sum();
        let expected = if r.len() == 1 { tp_beta(k, l) } else { Scalar::zero() };
        assert_eq!(*c, ratio(expected.clone()), "{k:?} {r:?}");
        if k.len() == 1 && r.len() == 1 {
            let at_one = expected.substitute(Var::Q, &Scalar::one());
            assert_eq!(at_one, Scalar::from(common::binom(k[0] + l, l) as i64));
        }
    }
}

#[test]
fn connes_moscovici_matches_forest_betas_at_the_tree_point() {
    let series = solve_growth(&presets::cm().unwrap(), 5).unwrap();
    let report = check_closure(&series, 5).unwrap();
    assert_eq!(report.status, ClosureStatus::Closed);
    let mut fb = ForestBetas::new();
    for total in 2..=5 {
        for l in 1..total {
            for k in partitions(total - l) {
                let forest = fb.beta(&k, l).unwrap();
                let cm = beta_variant(&forest, &k, l, BetaVariant::Cm).unwrap();
                assert_eq!(*report.beta(&k, l).unwrap(), cm, "{k:?} {l}");
            }
        }
    }
}

#[test]
fn gamma_formula_matches_coproduct() {
    let c = Couplings::symbolic(3).unwrap();
    let series = csg_series(&GrowthRule::Csg(c.clone()), 5);
    for n in 1..=5 {
        let delta = coproduct_vector(&series[n]);
        for k in 0..=n {
            for ck in enumerate(k).unwrap().iter() {
                for cl in enumerate(n - k).unwrap().iter() {
                    let direct = delta.coeff(ck, cl);
                    assert_eq!(gamma_formula(&c, ck, cl).unwrap(), direct, "{ck} (x) {cl}");
                }
            }
        }
    }
}

#[test]
fn gamma_formula_with_probabilities() {
    let t = vec![scalar(1, 2), scalar(1, 1), scalar(3, 1)];
    let c = Couplings::csg(t, Normalization::Probabilities).unwrap();
    let series = csg_series(&GrowthRule::Csg(c.clone()), 4);
    let delta = coproduct_vector(&series[4]);
    for k in 1..4 {
        for ck in enumerate(k).unwrap().iter() {
            for cl in enumerate(4 - k).unwrap().iter() {
                assert_eq!(gamma_formula(&c, ck, cl).unwrap(), delta.coeff(ck, cl));
            }
        }
    }
}

#[test]
fn originary_model_is_not_closed() {
    let c = Couplings::csg(vec![s("0"), s("1"), s("1")], Normalization::Weights).unwrap();
    let report = check_closure(&csg_series(&GrowthRule::Csg(c), 4), 4).unwrap();
    assert_eq!(report.status, ClosureStatus::NotClosed);
    let w = report.witness.unwrap();
    assert!(w.n <= 4);
    assert_eq!(w.left, "3:1-3,2-3".parse().unwrap());
    assert_eq!(w.right, Poset::point());
    assert!(!w.coeff.is_zero());
}

#[test]
fn non_geometric_couplings_are_not_closed() {
    let c = Couplings::csg(vec![s("1"), s("1"), s("2")], Normalization::Weights).unwrap();
    let report = check_closure(&csg_series(&GrowthRule::Csg(c), 4), 4).unwrap();
    assert_eq!(report.status, ClosureStatus::NotClosed);
    let w = report.witness.unwrap();
    assert_eq!((w.n, w.left, w.right), (4, "3:1-2,1-3".parse().unwrap(), Poset::point()));
    assert_eq!(w.coeff, s("31"));
}

#[test]
fn foissy_boundary() {
    let one = PowerSeries::new(vec![Scalar::one()]);
    let exp = PowerSeries::new([1, 1, 2, 6, 24, 120].iter().map(|&d| scalar(1, d)).collect());
    let geo = PowerSeries::new(vec![Scalar::one(); 6]);
    for f in [one, exp, geo] {
        let series = solve_growth(&presets::dse(f).unwrap(), 5).unwrap();
        assert_eq!(check_closure(&series, 5).unwrap().status, ClosureStatus::Closed);
    }
    let f = PowerSeries::new(vec![s("1"), s("1"), s("0"), s("1")]);
    let series = solve_growth(&presets::dse(f).unwrap(), 5).unwrap();
    let report = check_closure(&series, 5).unwrap();
    assert_eq!(report.status, ClosureStatus::NotClosed);
    let w = report.witness.unwrap();
    assert_eq!((w.n, w.left, w.right), (4, "3:1-3,2-3".parse().unwrap(), Poset::point()));
    assert_eq!(w.coeff, s("3"));
}

#[test]
fn dust_is_undetermined() {
    let series = csg_series(&GrowthRule::Csg(presets::dust().unwrap()), 4);
    let report = check_closure(&series, 4).unwrap();
    assert_eq!(report.status, ClosureStatus::Undetermined);
    assert!(report.rank_deficient.contains(&(2, 1)));
}

#[test]
fn closure_input_errors() {
    let series = forest_series(3);
    assert!(matches!(check_closure(&series, 4), Err(Error::SizeMismatch(_))));
    let mut bad = series.clone();
    bad[2] = PosetVector::from_poset(Poset::point());
    assert!(matches!(check_closure(&bad, 3), Err(Error::NonHomogeneous)));
}

#[test]
fn report_json_round_trip() {
    let report = check_closure(&forest_series(3), 3).unwrap();
    let text = serde_json::to_string(&report.to_json()).unwrap();
    assert!(text.contains("\"status\":\"closed\""));
    let back: ClosureReportJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report.to_json());
    let b11 = back.betas.iter().find(|b| b.k == vec![1] && b.l == 1 && b.right == vec![1]).unwrap();
    assert_eq!(b11.coeff, "2*t0 + t1");
}
