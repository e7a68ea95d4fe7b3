//! Closure of growth generators under the coproduct, and closed formulas for
//! the structure coefficients of the forest and tree models.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{solve_linear_exact, LinearSolution, Scalar, ScalarRatio, Var};
use crate::counting::{
    factorial, forest_partitions, multiplicities, multiplicity_factorial, num_templates, partitions, shuffles,
    templates,
};
use crate::error::{Error, Result};
use crate::growth::{lambda, lambda_shift, Couplings, Normalization};
use crate::hopf::{coproduct_vector, PosetVector};
use crate::poset::{Poset, PosetJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureStatus {
    /// Every coproduct lies in the span of products of generators.
    Closed,
    /// Some coproduct has no such expansion; see the witness.
    NotClosed,
    /// Expansions exist but are not unique because the generator products
    /// are linearly dependent.
    Undetermined,
}

/// A coproduct term that cannot be matched by products of generators.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureWitness {
    pub n: usize,
    pub left: Poset,
    pub right: Poset,
    /// Coefficient of `left ⊗ right` in `Δ(a_n)`.
    pub coeff: Scalar,
}

/// Key `(k, r)` of a structure coefficient: the coefficient of
/// `a_{k_1} ... a_{k_d} ⊗ a_{r_1} ... a_{r_e}`.
pub type BetaKey = (Vec<usize>, Vec<usize>);

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub status: ClosureStatus,
    /// Largest degree examined.
    pub checked_n: usize,
    pub betas: BTreeMap<BetaKey, ScalarRatio>,
    pub witness: Option<ClosureWitness>,
    /// Gradings `(k, l)` whose generator products were linearly dependent.
    pub rank_deficient: Vec<(usize, usize)>,
}

impl ClosureReport {
    /// `β_{k,l}` with a single generator on the right.
    pub fn beta(&self, k: &[usize], l: usize) -> Option<&ScalarRatio> {
        self.betas.get(&(k.to_vec(), vec![l]))
    }

    pub fn to_json(&self) -> ClosureReportJson {
        ClosureReportJson {
            status: self.status,
            checked_n: self.checked_n,
            betas: self
                .betas
                .iter()
                .map(|((k, r), c)| BetaJson { k: k.clone(), l: r.iter().sum(), right: r.clone(), coeff: c.to_string() })
                .collect(),
            witness: self.witness.as_ref().map(|w| WitnessJson {
                n: w.n,
                left: PosetJson::from_poset(&w.left),
                right: PosetJson::from_poset(&w.right),
                coeff: w.coeff.to_string(),
            }),
            rank_deficient: self.rank_deficient.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaJson {
    pub k: Vec<usize>,
    pub l: usize,
    pub right: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub n: usize,
    pub left: PosetJson,
    pub right: PosetJson,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReportJson {
    pub status: ClosureStatus,
    pub checked_n: usize,
    pub betas: Vec<BetaJson>,
    pub witness: Option<WitnessJson>,
    pub rank_deficient: Vec<(usize, usize)>,
}

/// Products `a_λ` of generators over partitions `λ`, skipping zero generators.
struct Monomials<'a> {
    series: &'a [PosetVector],
    cache: HashMap<Vec<usize>, PosetVector>,
}

impl<'a> Monomials<'a> {
    fn new(series: &'a [PosetVector]) -> Self {
        Monomials { series, cache: HashMap::new() }
    }

    fn basis(&self, k: usize) -> Vec<Vec<usize>> {
        partitions(k).into_iter().filter(|p| p.iter().all(|&i| !self.series[i].is_zero())).collect()
    }

    fn get(&mut self, parts: &[usize]) -> Result<PosetVector> {
        if let Some(v) = self.cache.get(parts) {
            return Ok(v.clone());
        }
        let v = match parts.split_first() {
            None => PosetVector::one(),
            Some((&first, rest)) => self.series[first].product(&self.get(rest)?)?,
        };
        self.cache.insert(parts.to_vec(), v.clone());
        Ok(v)
    }
}

/// Decides whether `Δ(a_n)` lies in the span of `a_λ ⊗ a_μ` for each
/// `2 <= n <= n_max`, where `series[n]` is the generator `a_n`.
///
/// Each grading `(k, l)` gives an exact linear system whose unknowns are the
/// structure coefficients. Zero generators are left out of the products.
pub fn check_closure(series: &[PosetVector], n_max: usize) -> Result<ClosureReport> {
    if series.len() <= n_max {
        return Err(Error::SizeMismatch(format!(
            "series has {} terms, degree {n_max} requested",
            series.len().saturating_sub(1)
        )));
    }
    for (n, a) in series.iter().enumerate().take(n_max + 1).skip(1) {
        if !a.is_zero() && a.degree() != Some(n) {
            return Err(Error::NonHomogeneous);
        }
    }
    let mut mono = Monomials::new(series);
    let mut report = ClosureReport {
        status: ClosureStatus::Closed,
        checked_n: n_max.max(1),
        betas: BTreeMap::new(),
        witness: None,
        rank_deficient: Vec::new(),
    };
    for n in 2..=n_max {
        let delta = coproduct_vector(&series[n]);
        for k in 1..n {
            let l = n - k;
            let lefts = mono.basis(k);
            let rights = mono.basis(l);
            let mut cols: Vec<(Vec<usize>, Vec<usize>, PosetVector, PosetVector)> = Vec::new();
            for lam in &lefts {
                for mu in &rights {
                    cols.push((lam.clone(), mu.clone(), mono.get(lam)?, mono.get(mu)?));
                }
            }
            let mut rows: BTreeMap<(Poset, Poset), usize> = BTreeMap::new();
            for ((u, d), _) in delta.terms() {
                if u.len() == k {
                    let next = rows.len();
                    rows.entry((*u, *d)).or_insert(next);
                }
            }
            for (_, _, left, right) in &cols {
                for (u, _) in left.terms() {
                    for (d, _) in right.terms() {
                        let next = rows.len();
                        rows.entry((*u, *d)).or_insert(next);
                    }
                }
            }
            let keys: Vec<(Poset, Poset)> = {
                let mut v: Vec<_> = rows.iter().map(|(k, &i)| (i, *k)).collect();
                v.sort();
                v.into_iter().map(|(_, k)| k).collect()
            };
            let a: Vec<Vec<Scalar>> =
                keys.iter().map(|(u, d)| cols.iter().map(|(_, _, l, r)| l.coeff(u) * r.coeff(d)).collect()).collect();
            let b: Vec<Scalar> = keys.iter().map(|(u, d)| delta.coeff(u, d)).collect();
            let witness_at = |row: usize| {
                let (u, d) = keys[row];
                ClosureWitness { n, left: u, right: d, coeff: delta.coeff(&u, &d) }
            };
            if cols.is_empty() {
                if let Some(row) = b.iter().position(|x| !x.is_zero()) {
                    report.status = ClosureStatus::NotClosed;
                    report.witness = Some(witness_at(row));
                    report.checked_n = n;
                    return Ok(report);
                }
                continue;
            }
            let solution = solve_linear_exact(&a, &b)?;
            let values = match solution {
                LinearSolution::Inconsistent { row } => {
                    report.status = ClosureStatus::NotClosed;
                    report.witness = Some(witness_at(row));
                    report.checked_n = n;
                    return Ok(report);
                }
                LinearSolution::Unique(x) => x,
                LinearSolution::Underdetermined { particular, .. } => {
                    report.rank_deficient.push((k, l));
                    particular
                }
            };
            for ((lam, mu, _, _), v) in cols.iter().zip(values) {
                report.betas.insert((lam.clone(), mu.clone()), v);
            }
        }
    }
    if !report.rank_deficient.is_empty() {
        report.status = ClosureStatus::Undetermined;
    }
    Ok(report)
}

fn int(n: BigInt) -> Scalar {
    Scalar::from(n)
}

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// For each element of a template: `(relations below it, elements it covers)`.
fn element_stats(t: &crate::poset::LabelledPoset) -> Vec<(usize, usize)> {
    (0..t.len()).map(|x| (t.num_below(x), t.lower_covers(x).count_ones() as usize)).collect()
}

/// Weight `w(C)`: the number of templates times the product of `λ(ϖ_x, m_x)`
/// over the elements of one template after the first.
pub fn weight(c: &Couplings, p: &Poset) -> Result<Scalar> {
    if p.is_empty() {
        return Ok(Scalar::one());
    }
    let stats = element_stats(&p.labelled());
    let mut w = Scalar::from(num_templates(p) as i64);
    for &(below, covers) in &stats[1..] {
        w *= &lambda(c, below, covers)?;
    }
    Ok(w)
}

/// Coefficient of `ck ⊗ cl` in `Δ(a_{k+l})` for classical sequential growth,
/// evaluated by summing over shuffles and templates instead of expanding the
/// coproduct.
///
/// Elements of `cl` keep their own weights; an element `x` of the `i`-th
/// component of `ck` contributes `λ^(v)(ϖ_x, m_x)` where `v` counts the
/// elements of `cl` born before it and `ϖ_x` counts all relations below `x`.
pub fn gamma_formula(c: &Couplings, ck: &Poset, cl: &Poset) -> Result<Scalar> {
    let total = ck.len() + cl.len();
    if cl.is_empty() {
        return normalise(c, weight(c, ck)?, total);
    }
    if ck.is_empty() {
        return normalise(c, weight(c, cl)?, total);
    }
    let comps = ck.components();
    let sizes: Vec<usize> = comps.iter().map(Poset::len).collect();
    let comp_templates: Vec<Vec<Vec<(usize, usize)>>> =
        comps.iter().map(|p| templates(p).iter().map(element_stats).collect()).collect();
    let mut cache: HashMap<(usize, usize, usize), Scalar> = HashMap::new();
    let mut lam = |v: usize, k: usize, p: usize| -> Result<Scalar> {
        if let Some(x) = cache.get(&(v, k, p)) {
            return Ok(x.clone());
        }
        let x = lambda_shift(c, v, k, p)?;
        cache.insert((v, k, p), x.clone());
        Ok(x)
    };
    let mut sum = Scalar::zero();
    for sh in shuffles(&sizes, cl.len()) {
        let mut prod = Scalar::one();
        for (i, temps) in comp_templates.iter().enumerate() {
            let mut inner = Scalar::zero();
            for stats in temps {
                let mut term = Scalar::one();
                for (x, &(below, covers)) in stats.iter().enumerate() {
                    term *= &lam(sh.v[i][x] as usize, below, covers)?;
                    if term.is_zero() {
                        break;
                    }
                }
                inner += term;
            }
            prod *= &inner;
            if prod.is_zero() {
                break;
            }
        }
        sum += prod;
    }
    let sym = multiplicity_factorial(&comps);
    let gamma = (sum * weight(c, cl)?).scale(&ratio(BigInt::one(), sym));
    normalise(c, gamma, total)
}

fn normalise(c: &Couplings, w: Scalar, n: usize) -> Result<Scalar> {
    if c.normalization() == Normalization::Weights {
        return Ok(w);
    }
    let mut z = Scalar::one();
    for x in 1..n {
        let l = lambda(c, x, 0)?;
        if l.is_zero() {
            return Err(Error::ZeroModel { step: x });
        }
        z *= &l;
    }
    w.exact_div(&z)
}

/// `f_n(F) = Σ_{π : N(π) = n} 1/Π_P μ^π(P)! · Π_P μ(P)! / Π_{B ∈ π} μ^B(P)!`,
/// summed over partitions `π` of the forest `F` whose block sizes are `n`.
/// `P` ranges over blocks in the first product and over trees in the second.
pub fn f_n(n: &[usize], forest: &Poset) -> Result<BigRational> {
    let mut target = n.to_vec();
    target.sort_by(|a, b| b.cmp(a));
    let trees = forest.components();
    let tree_mult = multiplicities(&trees);
    let mut out = BigRational::zero();
    for pi in forest_partitions(forest)? {
        if pi.sizes() != target {
            continue;
        }
        let mut num = BigInt::one();
        for &m in tree_mult.values() {
            num *= factorial(m);
        }
        let mut den = multiplicity_factorial(&pi.blocks);
        for block in &pi.blocks {
            den *= multiplicity_factorial(&block.components());
        }
        out += ratio(num, den);
    }
    Ok(out)
}

/// First-order structure coefficient `β_{k,l}` of the unnormalised forest model:
/// `Σ_{i=1}^{l+1} C(l+k-i, l+1-i) (t0 + (i-1) t1)`.
pub fn first_order_beta(k: usize, l: usize) -> Scalar {
    let mut out = Scalar::zero();
    for i in 1..=l + 1 {
        let c = crate::counting::binomial(l + k - i, l + 1 - i);
        out += int(c) * (Scalar::t(0) + Scalar::from((i - 1) as i64) * Scalar::t(1));
    }
    out
}

/// Structure coefficients `β_{k,l}` of the unnormalised forest model, in the
/// variables `t0`, `t1`, computed recursively over coarser partitions.
#[derive(Default)]
pub struct ForestBetas {
    cache: HashMap<(Vec<usize>, usize), Scalar>,
}

impl ForestBetas {
    pub fn new() -> Self {
        ForestBetas::default()
    }

    /// `Σ_{Sh(k, l)} Π_i (t0 + v^i_1 t1)`.
    pub fn shuffle_sum(k: &[usize], l: usize) -> Scalar {
        let mut out = Scalar::zero();
        for sh in shuffles(k, l) {
            let mut prod = Scalar::one();
            for v in &sh.v {
                prod *= &(Scalar::t(0) + Scalar::from(v[0] as i64) * Scalar::t(1));
            }
            out += prod;
        }
        out
    }

    /// The correction term `t0^d / k! · B_{k,l}` built from coarser partitions,
    /// using corollas as the witness forest.
    pub fn correction(&mut self, k: &[usize], l: usize) -> Result<Scalar> {
        let k = sorted_desc(k);
        let forest = corollas(&k)?;
        self.correction_with(&k, l, &forest)
    }

    fn correction_with(&mut self, k: &[usize], l: usize, forest: &Poset) -> Result<Scalar> {
        let d = k.len();
        let total: usize = k.iter().sum();
        let kfact: BigInt = k.iter().map(|&x| factorial(x)).product();
        let mut acc = Scalar::zero();
        for n in partitions(total) {
            if n == k || n.len() >= d {
                continue;
            }
            let f = f_n(&n, forest)?;
            if f.is_zero() {
                continue;
            }
            let nfact: BigInt = n.iter().map(|&x| factorial(x)).product();
            let coeff = f * ratio(nfact * multiplicity_factorial(&n), kfact.clone());
            let beta = self.beta(&n, l)?;
            acc += (beta * Scalar::t(0).pow((d - n.len()) as u32)).scale(&coeff);
        }
        Ok(acc)
    }

    /// `β_{k,l}` with the top-level correction computed on `forest`, whose
    /// trees must have sizes `k`. Coarser coefficients still use corollas.
    pub fn beta_with_witness(&mut self, k: &[usize], l: usize, forest: &Poset) -> Result<Scalar> {
        let k = sorted_desc(k);
        if !forest.is_forest() {
            return Err(Error::NotAForest);
        }
        let sizes = sorted_desc(&forest.components().iter().map(Poset::len).collect::<Vec<_>>());
        if sizes != k {
            return Err(Error::SizeMismatch(format!("witness trees have sizes {sizes:?}, expected {k:?}")));
        }
        if k.contains(&0) || l == 0 {
            return Err(Error::DomainError("β needs nonempty positive parts and l >= 1".into()));
        }
        let s = Self::shuffle_sum(&k, l);
        let corr = self.correction_with(&k, l, forest)?;
        Ok((s - corr).scale(&ratio(BigInt::one(), multiplicity_factorial(&k))))
    }

    pub fn beta(&mut self, k: &[usize], l: usize) -> Result<Scalar> {
        let k = sorted_desc(k);
        if k.is_empty() || k.contains(&0) || l == 0 {
            return Err(Error::DomainError("β needs nonempty positive parts and l >= 1".into()));
        }
        if let Some(b) = self.cache.get(&(k.clone(), l)) {
            return Ok(b.clone());
        }
        let s = Self::shuffle_sum(&k, l);
        let corr = self.correction(&k, l)?;
        let mu = multiplicity_factorial(&k);
        let out = (s - corr).scale(&ratio(BigInt::one(), mu));
        self.cache.insert((k, l), out.clone());
        Ok(out)
    }
}

fn sorted_desc(k: &[usize]) -> Vec<usize> {
    let mut k = k.to_vec();
    k.sort_by(|a, b| b.cmp(a));
    k
}

/// Disjoint union of corollas (a root below `m - 1` leaves) with the given sizes.
pub fn corollas(k: &[usize]) -> Result<Poset> {
    let mut f = Poset::empty();
    for &m in k {
        let leaves: Vec<(usize, usize)> = (1..m).map(|j| (0, j)).collect();
        f = f.disjoint_union(&Poset::from_relations(m, &leaves)?)?;
    }
    Ok(f)
}

/// Flavours of the forest and tree structure coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaVariant {
    /// Unnormalised forests, in `t0` and `t1`.
    Forest,
    /// Normalised forests, in `t = t1 / t0`.
    NormalisedForest,
    /// Unnormalised trees (`t0 = 0`), in `t1`.
    Tree,
    /// Normalised trees: rational numbers.
    NormalisedTree,
    /// Connes–Moscovici generators (`t0 = 0`, `t1 = 1`).
    Cm,
}

/// `Π_{x=1}^{n-1} (t0 + x t1)`: total weight of all posets of size `n`.
fn total_weight(n: usize) -> Scalar {
    (1..n).map(|x| Scalar::t(0) + Scalar::from(x as i64) * Scalar::t(1)).product()
}

/// Converts an unnormalised forest coefficient to the requested variant.
///
/// Normalised generators are `a_n / Π_{x=1}^{n-1}(t0 + x t1)`, so the
/// coefficient picks up the ratio of these totals.
pub fn beta_variant(beta: &Scalar, k: &[usize], l: usize, variant: BetaVariant) -> Result<ScalarRatio> {
    let tree = [(Var::T(0), Scalar::zero())];
    let total: usize = k.iter().sum::<usize>() + l;
    let normalised = || -> Result<ScalarRatio> {
        let num = k.iter().fold(beta * total_weight(l), |acc, &ki| acc * total_weight(ki));
        ScalarRatio::new(num, total_weight(total))
    };
    match variant {
        BetaVariant::Forest => Ok(ScalarRatio::from_scalar(beta.clone())),
        BetaVariant::Tree => Ok(ScalarRatio::from_scalar(beta.substitute_all(&tree))),
        BetaVariant::Cm => Ok(ScalarRatio::from_scalar(
            beta.substitute_all(&[(Var::T(0), Scalar::zero()), (Var::T(1), Scalar::one())]),
        )),
        BetaVariant::NormalisedForest => {
            let r = normalised()?;
            let subs = [(Var::T(0), Scalar::one()), (Var::T(1), Scalar::var(Var::Ratio))];
            ScalarRatio::new(r.numer().substitute_all(&subs), r.denom().substitute_all(&subs))
        }
        BetaVariant::NormalisedTree => {
            let r = normalised()?;
            let subs = [(Var::T(0), Scalar::zero())];
            let num = r.numer().substitute_all(&subs);
            let den = r.denom().substitute_all(&subs);
            ScalarRatio::new(num, den)
        }
    }
}

/// Structure coefficients of transitive percolation, `β_{k,l} = [k+l choose l]_q`
/// when the left side is a single generator and zero otherwise.
pub fn tp_beta(k: &[usize], l: usize) -> Scalar {
    if k.len() == 1 {
        crate::algebra::qbinom(k[0] + l, l)
    } else {
        Scalar::zero()
    }
}
