mod common;

use posethopf::counting::{
    binomial, factorial, forest_partitions, multiplicities, num_templates, partitions, set_partitions, shuffles,
    templates,
};
use posethopf::poset::enumerate;
use posethopf::{Error, Poset, Scalar};

use common::Rel;

#[test]
fn templates_match_linear_extensions_over_automorphisms() {
    for n in 0..=6 {
        for p in enumerate(n).unwrap().iter() {
            let oracle = Rel::from_poset(p).psi();
            assert_eq!(num_templates(p) as u128, oracle, "{p}");
        }
    }
}

#[test]
fn templates_are_distinct_natural_labellings_of_the_same_poset() {
    for p in enumerate(5).unwrap().iter() {
        let ts = templates(p);
        for t in &ts {
            assert!(t.is_natural());
            assert_eq!(Poset::from_labelled(t), *p);
        }
        let mut bits: Vec<u64> = ts.iter().map(|t| t.natural_bits()).collect();
        bits.sort();
        bits.dedup();
        assert_eq!(bits.len(), ts.len());
    }
}

#[test]
fn v_has_one_template_and_chain_plus_point_has_three() {
    assert_eq!(num_templates(&"3:1-2,1-3".parse().unwrap()), 1);
    assert_eq!(num_templates(&"3:1-3,2-3".parse().unwrap()), 1);
    assert_eq!(num_templates(&"3:1-2".parse().unwrap()), 3);
    assert_eq!(num_templates(&Poset::antichain(4).unwrap()), 1);
}

#[test]
fn integer_partitions() {
    assert_eq!(partitions(4), vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
    let counts: Vec<usize> = (0..=10).map(|n| partitions(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
}

#[test]
fn set_partitions_are_bell_numbers() {
    let counts: Vec<usize> = (0..=6).map(|n| set_partitions(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
}

#[test]
fn factorials_binomials_multiplicities() {
    assert_eq!(factorial(6), 720.into());
    assert_eq!(binomial(6, 2), 15.into());
    assert_eq!(binomial(2, 6), 0.into());
    let m = multiplicities(&[2, 1, 2, 2]);
    assert_eq!(m.get(&2), Some(&3));
    assert_eq!(m.get(&1), Some(&1));
}

#[test]
fn shuffle_counts_are_multinomial() {
    for (k, l) in [(vec![1], 1), (vec![2, 1], 2), (vec![1, 1, 1], 2), (vec![3, 2], 1), (vec![2], 0)] {
        let total: usize = k.iter().sum::<usize>() + l;
        let mut expected = common::factorial(total);
        for &x in k.iter().chain(std::iter::once(&l)) {
            expected /= common::factorial(x);
        }
        let all: Vec<_> = shuffles(&k, l).collect();
        assert_eq!(all.len() as u128, expected, "{k:?} {l}");
        for sh in &all {
            for (i, &ki) in k.iter().enumerate() {
                assert_eq!(sh.v[i].len(), ki);
                assert!(sh.v[i].windows(2).all(|w| w[0] <= w[1]));
                assert!(sh.v[i].iter().all(|&x| x as usize <= l));
            }
        }
    }
}

#[test]
fn shuffle_sum_for_two_singletons() {
    // Σ over Sh((1,1),1) of Π (t0 + v t1) = 2 (3 t0^2 + 3 t0 t1 + t1^2)
    let mut total = Scalar::zero();
    for sh in shuffles(&[1, 1], 1) {
        let mut prod = Scalar::one();
        for v in &sh.v {
            prod *= &(Scalar::t(0) + Scalar::from(v[0] as i64) * Scalar::t(1));
        }
        total += prod;
    }
    assert_eq!(total, "6*t0^2 + 6*t0*t1 + 2*t1^2".parse().unwrap());
}

#[test]
fn partition_example_table() {
    let f: Poset = "4:1-2".parse().unwrap();
    let parts = forest_partitions(&f).unwrap();
    let sizes: Vec<Vec<usize>> = parts.iter().map(|p| p.sizes()).collect();
    assert_eq!(sizes, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1]]);
    let twos: Vec<usize> = sizes.iter().map(|s| s.iter().filter(|&&x| x == 2).count()).collect();
    assert_eq!(twos, vec![0, 0, 2, 1]);
}

#[test]
fn forest_partitions_need_a_forest() {
    assert!(matches!(forest_partitions(&"3:1-3,2-3".parse().unwrap()), Err(Error::NotAForest)));
    let one = forest_partitions(&"3:1-2,1-3".parse().unwrap()).unwrap();
    assert_eq!(one.len(), 1);
}
