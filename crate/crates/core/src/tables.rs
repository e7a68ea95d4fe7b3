use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use posethopf::algebra::{qbinom, rat, Scalar, ScalarRatio};
use posethopf::counting::{forest_partitions, multiplicity_factorial};
use posethopf::error::{Error, Result};
use posethopf::growth::{grow_distribution, presets, solve_growth, Couplings, GrowthRule, Normalization};
use posethopf::hopf::{coproduct, PosetVector};
use posethopf::poset::{enumerate, Poset};
use posethopf::subhopf::{
    beta_variant, check_closure, first_order_beta, BetaKey, BetaVariant, ClosureReport, ClosureStatus, ForestBetas,
};

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::DomainError(format!("{}: {e}", path.display()))
}

/// Writes every reference table into `dir` and returns the paths written.
pub fn write_all(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let tables: Vec<(&str, String)> = vec![
        ("coproduct_example.txt", coproduct_example()?),
        ("partition_example.txt", partition_example()?),
        ("beta_first_order.txt", beta_first_order()?),
        ("beta_more.txt", beta_more()?),
        ("forest_coproducts.txt", forest_coproducts()?),
        ("cm_generators.txt", cm_generators()?),
        ("tp_beta.txt", tp_betas()?),
        ("dse_plane_trees.txt", dse_plane_trees()?),
    ];
    let mut out = Vec::new();
    for (name, body) in tables {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| io_err(&path, e))?;
        out.push(path);
    }
    Ok(out)
}

fn word(letter: char, parts: &[usize]) -> String {
    parts.iter().map(|k| format!("{letter}{k}")).collect::<Vec<_>>().join(" ")
}

fn list(parts: &[usize]) -> String {
    parts.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn coproduct_example() -> Result<String> {
    let c2 = Poset::chain(2)?;
    let p = c2.disjoint_union(&c2)?;
    let mut s = format!("# coproduct of {p}\n");
    write!(s, "{}", coproduct(&p)).unwrap();
    Ok(s)
}

pub fn partition_example() -> Result<String> {
    let f = Poset::chain(2)?.disjoint_union(&Poset::antichain(2)?)?;
    let mut s = format!("# partitions of the forest {f} into subforests\n# blocks\tN\tmultiplicity of 2 in N\n");
    for pi in forest_partitions(&f)? {
        let blocks: Vec<String> = pi.blocks.iter().map(Poset::to_text).collect();
        let n = pi.sizes();
        let mu2 = n.iter().filter(|&&x| x == 2).count();
        writeln!(s, "{{{}}}\t{}\t{mu2}", blocks.join(" | "), list(&n)).unwrap();
    }
    Ok(s)
}

const VARIANTS: [(&str, BetaVariant); 5] = [
    ("normalised forest, t = t1/t0", BetaVariant::NormalisedForest),
    ("unnormalised forest", BetaVariant::Forest),
    ("normalised tree", BetaVariant::NormalisedTree),
    ("unnormalised tree", BetaVariant::Tree),
    ("connes-moscovici", BetaVariant::Cm),
];

fn show_ratio(r: &ScalarRatio) -> String {
    match r.to_scalar() {
        Some(s) => s.to_string(),
        None => r.to_string(),
    }
}

pub fn beta_first_order() -> Result<String> {
    let mut s = String::from("# beta_{k,l} with a single generator on the left, k + l <= 6\n");
    for (name, v) in VARIANTS {
        writeln!(s, "\n[{name}]").unwrap();
        for n in 2..=6 {
            for k in (1..n).rev() {
                let l = n - k;
                let b = beta_variant(&first_order_beta(k, l), &[k], l, v)?;
                writeln!(s, "{k} {l}\t{}", show_ratio(&b)).unwrap();
            }
        }
    }
    Ok(s)
}

pub fn beta_more() -> Result<String> {
    let mut s = String::from(
        "# unnormalised forest model, several generators on the left, |k| + l <= 5\n\
         # k | l\tshuffle sum / mu!\tcorrection / mu!\tbeta\n",
    );
    let mut fb = ForestBetas::new();
    for n in 3..=5 {
        for k_total in (2..n).rev() {
            let l = n - k_total;
            for k in posethopf::counting::partitions(k_total) {
                if k.len() < 2 {
                    continue;
                }
                let mu = ScalarRatio::from_scalar(Scalar::from(multiplicity_factorial(&k)));
                let shuffle = ScalarRatio::from_scalar(ForestBetas::shuffle_sum(&k, l)).div(&mu)?;
                let corr = ScalarRatio::from_scalar(fb.correction(&k, l)?).div(&mu)?;
                let beta = fb.beta(&k, l)?;
                writeln!(s, "{} | {l}\t{}\t{}\t{beta}", list(&k), show_ratio(&shuffle), show_ratio(&corr)).unwrap();
            }
        }
    }
    Ok(s)
}

/// Display order: by the right factor, then larger left generators first.
fn ordered(report: &ClosureReport, n: usize) -> Vec<(&BetaKey, &ScalarRatio)> {
    let mut items: Vec<_> = report
        .betas
        .iter()
        .filter(|((k, r), c)| k.iter().sum::<usize>() + r.iter().sum::<usize>() == n && !c.is_zero())
        .collect();
    items.sort_by(|((k1, r1), _), ((k2, r2), _)| {
        (r1.iter().sum::<usize>(), r1).cmp(&(r2.iter().sum::<usize>(), r2)).then(k2.cmp(k1))
    });
    items
}

fn reduced_coproduct_lines(report: &ClosureReport, letter: char, n_max: usize) -> String {
    let mut s = String::new();
    for n in 2..=n_max {
        let terms: Vec<String> = ordered(report, n)
            .into_iter()
            .map(|((k, r), c)| format!("({}) {} (x) {}", show_ratio(c), word(letter, k), word(letter, r)))
            .collect();
        writeln!(s, "D~({letter}{n}) = {}", terms.join(" + ")).unwrap();
    }
    s
}

fn forest_series(n_max: usize) -> Result<Vec<PosetVector>> {
    let rule = GrowthRule::Csg(presets::forest(None)?);
    let mut series = vec![PosetVector::zero()];
    for n in 1..=n_max {
        series.push(grow_distribution(n, &rule, None)?);
    }
    Ok(series)
}

pub fn forest_coproducts() -> Result<String> {
    let series = forest_series(4)?;
    let report = check_closure(&series, 4)?;
    let mut s = String::from(
        "# reduced coproducts of the unnormalised forest generators\n\
         # note: the a1 (x) a1 coefficient of D~(a2) is 2*t0 + t1 by direct expansion; \
         it is sometimes quoted as t0 + 2*t1\n",
    );
    s.push_str(&reduced_coproduct_lines(&report, 'a', 4));
    Ok(s)
}

pub fn cm_generators() -> Result<String> {
    let series = solve_growth(&presets::cm()?, 4)?;
    let mut s = String::from("# connes-moscovici generators d_n, rooted trees weighted by natural labellings\n");
    for (n, a) in series.iter().enumerate().skip(1) {
        writeln!(s, "d{n}:").unwrap();
        write!(s, "{a}").unwrap();
    }
    let report = check_closure(&series, 4)?;
    s.push_str(&reduced_coproduct_lines(&report, 'd', 4));
    Ok(s)
}

pub fn tp_betas() -> Result<String> {
    let rule = presets::tp(None)?;
    let mut series = vec![PosetVector::zero()];
    for n in 1..=5 {
        series.push(grow_distribution(n, &rule, None)?);
    }
    let report = check_closure(&series, 5)?;
    let mut s = String::from("# transitive percolation in q = 1 - p: nonzero beta coefficients up to degree 5\n");
    for n in 2..=5 {
        for ((k, r), c) in ordered(&report, n) {
            writeln!(s, "{} | {}\t{}", list(k), list(r), show_ratio(c)).unwrap();
        }
    }
    Ok(s)
}

pub fn dse_plane_trees() -> Result<String> {
    let spec = presets::dse_foissy(&rat(1, 1), &rat(1, 1), 5)?;
    let series = solve_growth(&spec, 4)?;
    let mut s = String::from("# A = B+(1/(1 - A)): plane trees counted by embeddings\n");
    for (n, a) in series.iter().enumerate().skip(1) {
        writeln!(s, "a{n}:").unwrap();
        write!(s, "{a}").unwrap();
    }
    Ok(s)
}

/// Quick consistency checks, returned as (name, passed).
pub fn selftest(seed: u64) -> Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    let counts = [1usize, 1, 2, 5, 16, 63, 318];
    let ok = (0..counts.len()).all(|n| enumerate(n).map(|v| v.len() == counts[n]).unwrap_or(false));
    out.push(("poset counts up to 6".to_string(), ok));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t: Vec<Scalar> =
        (0..4).map(|_| Scalar::from_rational(rat(rng.gen_range(1..10), rng.gen_range(1..10)))).collect();
    let rule = GrowthRule::Csg(Couplings::csg(t, Normalization::Probabilities)?);
    let ok = (1..=5).all(|n| grow_distribution(n, &rule, None).map(|v| v.total().is_one()).unwrap_or(false));
    out.push(("probabilities sum to one for random couplings".to_string(), ok));

    let rule = presets::tp(None)?;
    let mut series = vec![PosetVector::zero()];
    for n in 1..=4 {
        series.push(grow_distribution(n, &rule, None)?);
    }
    let report = check_closure(&series, 4)?;
    let ok = report.status == ClosureStatus::Closed
        && (1..4).all(|k| report.beta(&[k], 4 - k).and_then(ScalarRatio::to_scalar) == Some(qbinom(4, 4 - k)));
    out.push(("transitive percolation coefficients are q-binomials".to_string(), ok));

    let report = check_closure(&forest_series(4)?, 4)?;
    let mut fb = ForestBetas::new();
    let mut ok = report.status == ClosureStatus::Closed;
    for (k, l) in [(vec![1, 1], 1), (vec![2, 1], 1), (vec![1, 1], 2), (vec![1, 1, 1], 1)] {
        ok &= report.beta(&k, l).and_then(ScalarRatio::to_scalar) == Some(fb.beta(&k, l)?);
    }
    out.push(("forest recursion matches extracted coefficients".to_string(), ok));

    let d4 = &solve_growth(&presets::cm()?, 4)?[4];
    let mut coeffs: Vec<String> = d4.terms().map(|(_, c)| c.to_string()).collect();
    coeffs.sort();
    out.push(("connes-moscovici d4 weights".to_string(), coeffs == ["1", "1", "1", "3"]));

    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for p in enumerate(4)?.iter() {
        let d = coproduct(p);
        let total: Scalar = d.terms().map(|(_, c)| c.clone()).sum();
        *counts.entry(p.len()).or_default() +=
            usize::from(total == Scalar::from(p.labelled().down_sets().len() as i64));
    }
    out.push(("coproduct terms count down-sets".to_string(), counts.get(&4) == Some(&16)));

    Ok(out)
}
