//! Sequential growth models: new elements are born one at a time above a
//! down-set of the existing poset.

use num_bigint::BigInt;
use num_rational::BigRational;

use serde::{Deserialize, Serialize};

use crate::algebra::{series_compose, PowerSeries, Scalar, Var, MAX_COUPLING};
use crate::counting::binomial;
use crate::error::{Error, Result};
use crate::hopf::PosetVector;
use crate::poset::{check_size, LabelledPoset, Mask, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Unnormalised weights with `w(•) = 1`.
    Weights,
    /// Transition probabilities; needs rational couplings.
    Probabilities,
}

/// Couplings `t_0..t_K` and spawn rates `s_0..s_K` with `K = 8`.
#[derive(Clone, Debug, PartialEq)]
pub struct Couplings {
    t: Vec<Scalar>,
    s: Vec<Scalar>,
    normalization: Normalization,
}

fn int(n: BigInt) -> Scalar {
    Scalar::from(n)
}

impl Couplings {
    /// Missing `t` entries are zero; missing `s` entries repeat the last one
    /// given (all ones when `s` is empty).
    pub fn new(t: Vec<Scalar>, s: Vec<Scalar>, normalization: Normalization) -> Result<Couplings> {
        let cap = MAX_COUPLING + 1;
        if t.len() > cap {
            return Err(Error::IndexOutOfRange { index: t.len() - 1, max: MAX_COUPLING });
        }
        if s.len() > cap {
            return Err(Error::IndexOutOfRange { index: s.len() - 1, max: MAX_COUPLING });
        }
        let mut t = t;
        t.resize(cap, Scalar::zero());
        let fill = s.last().cloned().unwrap_or_else(Scalar::one);
        let mut s = s;
        s.resize(cap, fill);
        let c = Couplings { t, s, normalization };
        if normalization == Normalization::Probabilities && !c.is_rational() {
            return Err(Error::SymbolicNormalization);
        }
        Ok(c)
    }

    /// Classical sequential growth couplings with `s ≡ 1`.
    pub fn csg(t: Vec<Scalar>, normalization: Normalization) -> Result<Couplings> {
        Couplings::new(t, Vec::new(), normalization)
    }

    pub fn csg_rational(t: &[BigRational], normalization: Normalization) -> Result<Couplings> {
        Couplings::csg(t.iter().cloned().map(Scalar::from).collect(), normalization)
    }

    /// `t_i` the variable `ti` for `i <= k`, zero beyond; weights.
    pub fn symbolic(k: usize) -> Result<Couplings> {
        if k > MAX_COUPLING {
            return Err(Error::IndexOutOfRange { index: k, max: MAX_COUPLING });
        }
        Couplings::csg((0..=k).map(Scalar::t).collect(), Normalization::Weights)
    }

    pub fn t(&self, i: usize) -> Result<&Scalar> {
        self.t.get(i).ok_or(Error::IndexOutOfRange { index: i, max: MAX_COUPLING })
    }

    pub fn s(&self, i: usize) -> Result<&Scalar> {
        self.s.get(i).ok_or(Error::IndexOutOfRange { index: i, max: MAX_COUPLING })
    }

    pub fn ts(&self) -> &[Scalar] {
        &self.t
    }

    pub fn ss(&self) -> &[Scalar] {
        &self.s
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn with_normalization(&self, normalization: Normalization) -> Result<Couplings> {
        Couplings::new(self.t.clone(), self.s.clone(), normalization)
    }

    pub fn is_rational(&self) -> bool {
        self.t.iter().chain(self.s.iter()).all(Scalar::is_constant)
    }

    /// Smallest `k` with `t_k` not identically zero.
    pub fn first_nonzero_t(&self) -> Option<usize> {
        self.t.iter().position(|x| !x.is_zero())
    }

    pub fn first_nonzero_s(&self) -> Option<usize> {
        self.s.iter().position(|x| !x.is_zero())
    }

    /// Replaces variables in every coupling.
    pub fn substitute(&self, values: &[(Var, Scalar)]) -> Result<Couplings> {
        Couplings::new(
            self.t.iter().map(|x| x.substitute_all(values)).collect(),
            self.s.iter().map(|x| x.substitute_all(values)).collect(),
            self.normalization,
        )
    }

    pub fn to_json(&self) -> CouplingsJson {
        CouplingsJson {
            t: self.t.iter().map(Scalar::to_string).collect(),
            s: self.s.iter().map(Scalar::to_string).collect(),
            mode: Some(if self.is_rational() { "rational" } else { "symbolic" }.into()),
            normalization: Some(self.normalization),
        }
    }
}

/// JSON form `{"t": [...], "s": [...], "mode": ..., "normalization": ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingsJson {
    pub t: Vec<String>,
    #[serde(default)]
    pub s: Vec<String>,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub normalization: Option<Normalization>,
}

impl CouplingsJson {
    pub fn to_couplings(&self) -> Result<Couplings> {
        let parse = |v: &[String]| -> Result<Vec<Scalar>> { v.iter().map(|x| x.parse()).collect() };
        let t = parse(&self.t)?;
        let s = parse(&self.s)?;
        let symbolic = t.iter().chain(s.iter()).any(|x| !x.is_constant());
        match self.mode.as_deref() {
            None | Some("symbolic") => {}
            Some("rational") if !symbolic => {}
            Some("rational") => return Err(Error::Parse("mode is rational but a coupling has variables".into())),
            Some(other) => return Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
        let normalization =
            self.normalization.unwrap_or(if symbolic { Normalization::Weights } else { Normalization::Probabilities });
        Couplings::new(t, s, normalization)
    }
}

/// `λ(k, p) = Σ_i C(k - p, i) t_{p+i}`: total weight of the proto-pasts of a
/// new element whose past has `k` elements, `p` of them maximal.
pub fn lambda(c: &Couplings, k: usize, p: usize) -> Result<Scalar> {
    lambda_shift(c, 0, k, p)
}

/// `λ^(v)(k, p) = Σ_{r,s} C(v, r) C(k - p, s) t_{r+s+p}`.
pub fn lambda_shift(c: &Couplings, v: usize, k: usize, p: usize) -> Result<Scalar> {
    if p > k {
        return Err(Error::DomainError(format!("λ({k}, {p}) needs p <= k")));
    }
    if v + k > MAX_COUPLING {
        return Err(Error::IndexOutOfRange { index: v + k, max: MAX_COUPLING });
    }
    let mut out = Scalar::zero();
    for r in 0..=v {
        for s in 0..=k - p {
            let t = c.t(r + s + p)?;
            if !t.is_zero() {
                out += int(binomial(v, r) * binomial(k - p, s)) * t;
            }
        }
    }
    Ok(out)
}

/// A rule giving the weight of each transition.
#[derive(Clone, Debug, PartialEq)]
pub enum GrowthRule {
    /// Classical sequential growth with the given couplings.
    Csg(Couplings),
    /// Transitive percolation with parameter `q`: each existing element lies
    /// below the new one independently with probability `p = 1 - q`.
    Percolation(Scalar),
}

impl GrowthRule {
    /// Weight of giving a parent of size `n` a new element above a down-set of
    /// size `size` with `maximal` maximal elements.
    pub fn transition(&self, n: usize, size: usize, maximal: usize) -> Result<Scalar> {
        match self {
            GrowthRule::Csg(c) => {
                let w = lambda(c, size, maximal)?;
                if c.normalization() == Normalization::Probabilities {
                    let z = lambda(c, n, 0)?;
                    if z.is_zero() {
                        return Err(Error::ZeroModel { step: n });
                    }
                    return w.exact_div(&z);
                }
                Ok(w)
            }
            GrowthRule::Percolation(q) => {
                let p = Scalar::one() - q;
                Ok(p.pow(maximal as u32) * q.pow((n - size) as u32))
            }
        }
    }

    /// Weight of a single proto-past of size `s` in a parent of size `n`.
    fn proto_past(&self, n: usize, s: usize) -> Result<Scalar> {
        match self {
            GrowthRule::Csg(c) => {
                let w = c.t(s)?.clone();
                if c.normalization() == Normalization::Probabilities {
                    let z = lambda(c, n, 0)?;
                    if z.is_zero() {
                        return Err(Error::ZeroModel { step: n });
                    }
                    return w.exact_div(&z);
                }
                Ok(w)
            }
            GrowthRule::Percolation(q) => {
                let p = Scalar::one() - q;
                Ok(p.pow(s as u32) * q.pow((n - s) as u32))
            }
        }
    }

    fn start_degree(&self) -> Result<usize> {
        match self {
            GrowthRule::Csg(c) => c.first_nonzero_t().ok_or(Error::ZeroModel { step: 0 }),
            GrowthRule::Percolation(_) => Ok(0),
        }
    }
}

/// Every child of a labelled parent: the new element gets label `n` and lies
/// above the down-closure of a proto-past. Children are listed once each, by
/// down-set, with the total weight of the proto-pasts generating them.
pub fn children(parent: &LabelledPoset, rule: &GrowthRule) -> Result<Vec<(LabelledPoset, Scalar)>> {
    let n = parent.len();
    let mut by_past: std::collections::BTreeMap<Mask, Scalar> = std::collections::BTreeMap::new();
    for s in 0..=parent.full_mask() {
        let d = parent.down_closure(s);
        let w = rule.proto_past(n, s.count_ones() as usize)?;
        *by_past.entry(d).or_default() += w;
    }
    by_past.into_iter().map(|(d, w)| Ok((parent.b_s(d)?, w))).collect()
}

/// Number of down-sets `D` of `parent` with `B_D(parent)` isomorphic to `child`.
pub fn num_extensions(child: &Poset, parent: &Poset) -> Result<usize> {
    if child.len() != parent.len() + 1 {
        return Err(Error::SizeMismatch(format!("child has {} elements, parent has {}", child.len(), parent.len())));
    }
    let l = parent.labelled();
    let mut count = 0;
    for d in l.down_sets() {
        if Poset::from_labelled(&l.b_s(d)?) == *child {
            count += 1;
        }
    }
    Ok(count)
}

/// One growth step applied to every poset in `v`.
pub fn step(v: &PosetVector, rule: &GrowthRule) -> Result<PosetVector> {
    let mut out = PosetVector::zero();
    for (p, c) in v.terms() {
        let l = p.labelled();
        let n = l.len();
        check_size(n + 1)?;
        for d in l.down_sets() {
            let maximal = l.maximal_in(d).count_ones() as usize;
            let w = rule.transition(n, d.count_ones() as usize, maximal)?;
            if w.is_zero() {
                continue;
            }
            out.add_term(Poset::from_labelled(&l.b_s(d)?), c * &w);
        }
    }
    Ok(out)
}

/// Distribution (or weight) of the unlabelled poset after growth to size `n`.
///
/// Growth starts from the single element unless the couplings vanish below
/// some `N > 1`, in which case `initial` (a vector of degree `N`) is required.
pub fn grow_distribution(n: usize, rule: &GrowthRule, initial: Option<&PosetVector>) -> Result<PosetVector> {
    check_size(n)?;
    if n == 0 {
        return Ok(PosetVector::one());
    }
    let start = rule.start_degree()?;
    let mut current = match initial {
        Some(v) => {
            if !v.is_homogeneous() || v.is_zero() {
                return Err(Error::NonHomogeneous);
            }
            v.clone()
        }
        None if start <= 1 => PosetVector::from_poset(Poset::point()),
        None => return Err(Error::MissingInitialCondition(start)),
    };
    let mut deg = current.degree().expect("homogeneous and nonzero");
    if deg > n {
        return Err(Error::DomainError(format!("initial condition has degree {deg} > {n}")));
    }
    while deg < n {
        current = step(&current, rule)?;
        deg += 1;
    }
    Ok(current)
}

/// `M(P) = Σ_S t_|S| s_{|P|-|S|} B_S(P)` over all subsets `S`, extended linearly.
pub fn m_operator(v: &PosetVector, c: &Couplings) -> Result<PosetVector> {
    let mut out = PosetVector::zero();
    for (p, coeff) in v.terms() {
        let l = p.labelled();
        let n = l.len();
        check_size(n + 1)?;
        for d in l.down_sets() {
            let size = d.count_ones() as usize;
            let m = l.maximal_in(d).count_ones() as usize;
            let mut w = Scalar::zero();
            for i in 0..=size - m {
                let t = c.t(m + i)?;
                let s = c.s(n - m - i)?;
                if !t.is_zero() && !s.is_zero() {
                    w += int(binomial(size - m, i)) * t * s;
                }
            }
            if !w.is_zero() {
                out.add_term(Poset::from_labelled(&l.b_s(d)?), coeff * &w);
            }
        }
    }
    Ok(out)
}

/// Growth equation `A(x) = b(x) + x M(f(A(x)))`.
#[derive(Clone, Debug)]
pub struct GrowthSpec {
    pub f: PowerSeries<Scalar>,
    /// `b[k]` is the degree-`k` part of `b`; `b[0]` must vanish.
    pub b: Vec<PosetVector>,
    pub couplings: Couplings,
}

impl GrowthSpec {
    /// Degree of `b`: the largest `k` with `b[k]` nonzero, or 0.
    pub fn degree_of_b(&self) -> usize {
        self.b.iter().rposition(|v| !v.is_zero()).unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.f.coeff(0) != Scalar::one() {
            return Err(Error::SpecViolation("f must have constant term 1".into()));
        }
        for (k, v) in self.b.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if k == 0 {
                return Err(Error::SpecViolation("b must vanish at x = 0".into()));
            }
            if v.degree() != Some(k) {
                return Err(Error::NonHomogeneous);
            }
        }
        let kt =
            self.couplings.first_nonzero_t().ok_or_else(|| Error::SpecViolation("all couplings t vanish".into()))?;
        let ks =
            self.couplings.first_nonzero_s().ok_or_else(|| Error::SpecViolation("all couplings s vanish".into()))?;
        let d = self.degree_of_b();
        if d != kt + ks {
            return Err(Error::SpecViolation(format!("deg b = {d} but the first nonzero couplings give {}", kt + ks)));
        }
        Ok(())
    }
}

/// Solves the growth equation; entry `n` of the result is `a_n` (`a_0 = 0`).
pub fn solve_growth(spec: &GrowthSpec, n_max: usize) -> Result<Vec<PosetVector>> {
    spec.validate()?;
    check_size(n_max)?;
    let d = spec.degree_of_b();
    let mut a: Vec<PosetVector> = vec![PosetVector::zero()];
    for n in 1..=n_max {
        let next = if n <= d {
            spec.b.get(n).cloned().unwrap_or_default()
        } else {
            let series = PowerSeries::new(a.clone());
            let fa = series_compose(&spec.f, &series, n)?;
            m_operator(&fa.coeff(n - 1), &spec.couplings)?
        };
        a.push(next);
    }
    Ok(a)
}

pub mod presets {
    //! Named growth models.

    use super::*;
    use crate::algebra::foissy_series;

    /// Transitive percolation: `t_k = t^k` with probabilities, or the
    /// polynomial form in `q` when `t` is `None`.
    pub fn tp(t: Option<&BigRational>) -> Result<GrowthRule> {
        match t {
            None => Ok(GrowthRule::Percolation(Scalar::q())),
            Some(t) => {
                let ts: Vec<BigRational> = (0..=MAX_COUPLING).map(|k| num_traits::pow(t.clone(), k)).collect();
                Ok(GrowthRule::Csg(Couplings::csg_rational(&ts, Normalization::Probabilities)?))
            }
        }
    }

    /// Forest model `t = (t0, t1)`; symbolic weights when `values` is `None`.
    pub fn forest(values: Option<(&BigRational, &BigRational)>) -> Result<Couplings> {
        match values {
            None => Couplings::csg(vec![Scalar::t(0), Scalar::t(1)], Normalization::Weights),
            Some((t0, t1)) => Couplings::csg_rational(&[t0.clone(), t1.clone()], Normalization::Probabilities),
        }
    }

    /// Tree model `t = (0, 1)`.
    pub fn tree() -> Result<Couplings> {
        Couplings::csg(vec![Scalar::zero(), Scalar::one()], Normalization::Probabilities)
    }

    /// Dust model `t = (1)`: every new element is unrelated to the others.
    pub fn dust() -> Result<Couplings> {
        Couplings::csg(vec![Scalar::one()], Normalization::Probabilities)
    }

    /// Rooted trees with the Connes–Moscovici weights: `f = 1 + u`,
    /// `t = (0, 1, 0, ...)`, `s ≡ 1`, `b = x•`.
    pub fn cm() -> Result<GrowthSpec> {
        Ok(GrowthSpec {
            f: PowerSeries::new(vec![Scalar::one(), Scalar::one()]),
            b: vec![PosetVector::zero(), PosetVector::from_poset(Poset::point())],
            couplings: Couplings::new(
                vec![Scalar::zero(), Scalar::one()],
                vec![Scalar::one()],
                Normalization::Weights,
            )?,
        })
    }

    /// Combinatorial Dyson–Schwinger equation `A = B+(f(A))`: `s = (1, 0, ...)`,
    /// `t ≡ 1`, `b = 0`.
    pub fn dse(f: PowerSeries<Scalar>) -> Result<GrowthSpec> {
        Ok(GrowthSpec {
            f,
            b: Vec::new(),
            couplings: Couplings::new(
                vec![Scalar::one(); MAX_COUPLING + 1],
                vec![Scalar::one(), Scalar::zero()],
                Normalization::Weights,
            )?,
        })
    }

    /// [`dse`] with the series `(1 - αβx)^(-1/β)` and its limits.
    pub fn dse_foissy(alpha: &BigRational, beta: &BigRational, len: usize) -> Result<GrowthSpec> {
        dse(foissy_series(alpha, beta, len))
    }

    /// Classical growth seen through the growth equation: `f = 1 + u`, the
    /// spawn rates of `c`, `b = 0`. Requires `t_0 != 0`; then
    /// `a_n = t_0 s^n w_n` when `s` is constant.
    pub fn csg_spec(c: &Couplings) -> Result<GrowthSpec> {
        Ok(GrowthSpec {
            f: PowerSeries::new(vec![Scalar::one(), Scalar::one()]),
            b: Vec::new(),
            couplings: Couplings::new(c.ts().to_vec(), c.ss().to_vec(), Normalization::Weights)?,
        })
    }
}
