//! Linear combinations of posets, the disjoint-union product and the coproduct
//! that splits a poset into an up-set and its complementary down-set.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::poset::{Poset, PosetJson};

/// Finite linear combination of isomorphism classes of posets.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PosetVector {
    terms: BTreeMap<Poset, Scalar>,
}

impl PosetVector {
    pub fn zero() -> Self {
        PosetVector::default()
    }

    /// The unit: the empty poset with coefficient 1.
    pub fn one() -> Self {
        PosetVector::from_poset(Poset::empty())
    }

    pub fn from_poset(p: Poset) -> Self {
        PosetVector::from_term(p, Scalar::one())
    }

    pub fn from_term(p: Poset, c: Scalar) -> Self {
        let mut v = PosetVector::zero();
        v.add_term(p, c);
        v
    }

    pub fn add_term(&mut self, p: Poset, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: &Poset) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Poset, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common size of every poset present, `None` if sizes differ or the
    /// vector is zero.
    pub fn degree(&self) -> Option<usize> {
        let mut sizes = self.terms.keys().map(Poset::len);
        let first = sizes.next()?;
        sizes.all(|s| s == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn scale(&self, c: &Scalar) -> PosetVector {
        let mut out = PosetVector::zero();
        for (p, v) in &self.terms {
            out.add_term(*p, v * c);
        }
        out
    }

    pub fn add(&self, other: &PosetVector) -> PosetVector {
        let mut out = self.clone();
        for (p, v) in &other.terms {
            out.add_term(*p, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &PosetVector) -> PosetVector {
        let mut out = self.clone();
        for (p, v) in &other.terms {
            out.add_term(*p, -v);
        }
        out
    }

    /// Product extending disjoint union bilinearly.
    pub fn product(&self, other: &PosetVector) -> Result<PosetVector> {
        let mut out = PosetVector::zero();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p.disjoint_union(q)?, a * b);
            }
        }
        Ok(out)
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> Scalar {
        self.terms.values().sum()
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> PosetVector {
        let mut out = PosetVector::zero();
        for (p, v) in &self.terms {
            out.add_term(*p, f(v));
        }
        out
    }

    pub fn to_json(&self) -> Vec<PosetTermJson> {
        self.terms
            .iter()
            .map(|(p, c)| PosetTermJson { poset: PosetJson::from_poset(p), coeff: c.to_string() })
            .collect()
    }

    pub fn from_json(items: &[PosetTermJson]) -> Result<PosetVector> {
        let mut out = PosetVector::zero();
        for t in items {
            let p = Poset::from_labelled(&t.poset.to_labelled()?);
            out.add_term(p, t.coeff.parse()?);
        }
        Ok(out)
    }
}

impl fmt::Display for PosetVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for (p, c) in &self.terms {
            writeln!(f, "{p}\t{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PosetVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(p, c)| (p.to_text(), c.to_string()))).finish()
    }
}

impl Ring for PosetVector {
    fn zero() -> Self {
        PosetVector::zero()
    }
    fn one() -> Self {
        PosetVector::one()
    }
    fn is_zero(&self) -> bool {
        PosetVector::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        PosetVector::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.product(other).expect("truncated series stay within the size cap")
    }
    fn scale(&self, c: &Scalar) -> Self {
        PosetVector::scale(self, c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetTermJson {
    pub poset: PosetJson,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTermJson {
    pub left: PosetJson,
    pub right: PosetJson,
    pub coeff: String,
}

/// Finite linear combination of pairs of posets; the pair `(u, d)` stands for
/// `u ⊗ d`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorVector {
    terms: BTreeMap<(Poset, Poset), Scalar>,
}

impl TensorVector {
    pub fn zero() -> Self {
        TensorVector::default()
    }

    pub fn add_term(&mut self, left: Poset, right: Poset, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let e = self.terms.entry(key).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, left: &Poset, right: &Poset) -> Scalar {
        self.terms.get(&(*left, *right)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Poset, Poset), &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorVector) -> TensorVector {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(*l, *r, c.clone());
        }
        out
    }

    /// Drops the terms with an empty factor.
    pub fn reduced(&self) -> TensorVector {
        let mut out = TensorVector::zero();
        for ((l, r), c) in &self.terms {
            if !l.is_empty() && !r.is_empty() {
                out.add_term(*l, *r, c.clone());
            }
        }
        out
    }

    pub fn to_json(&self) -> Vec<TensorTermJson> {
        self.terms
            .iter()
            .map(|((l, r), c)| TensorTermJson {
                left: PosetJson::from_poset(l),
                right: PosetJson::from_poset(r),
                coeff: c.to_string(),
            })
            .collect()
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for ((l, r), c) in &self.terms {
            writeln!(f, "{l} (x) {r}\t{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|((l, r), c)| (format!("{l} (x) {r}"), c.to_string()))).finish()
    }
}

type Terms = std::rc::Rc<Vec<(Poset, Poset, u32)>>;

thread_local! {
    static COPRODUCTS: RefCell<HashMap<Poset, Terms>> =
        RefCell::new(HashMap::new());
}

/// Splittings of `p` into (up-set, complementary down-set), with multiplicity.
pub fn splittings(p: &Poset) -> std::rc::Rc<Vec<(Poset, Poset, u32)>> {
    if let Some(hit) = COPRODUCTS.with(|c| c.borrow().get(p).cloned()) {
        return hit;
    }
    let l = p.labelled();
    let full = l.full_mask();
    let mut acc: BTreeMap<(Poset, Poset), u32> = BTreeMap::new();
    for d in l.down_sets() {
        let up = Poset::from_labelled(&l.induced(full & !d));
        let down = Poset::from_labelled(&l.induced(d));
        *acc.entry((up, down)).or_insert(0) += 1;
    }
    let out = std::rc::Rc::new(acc.into_iter().map(|((u, d), m)| (u, d, m)).collect::<Vec<_>>());
    COPRODUCTS.with(|c| c.borrow_mut().insert(*p, out.clone()));
    out
}

/// `Δ(p) = Σ U ⊗ (p \ U)` over up-sets `U`, grouped by isomorphism class.
pub fn coproduct(p: &Poset) -> TensorVector {
    let mut out = TensorVector::zero();
    for (u, d, m) in splittings(p).iter() {
        out.add_term(*u, *d, Scalar::from(*m as i64));
    }
    out
}

pub fn coproduct_vector(v: &PosetVector) -> TensorVector {
    let mut out = TensorVector::zero();
    for (p, c) in v.terms() {
        for (u, d, m) in splittings(p).iter() {
            out.add_term(*u, *d, c * Scalar::from(*m as i64));
        }
    }
    out
}

/// Coefficient of the empty poset.
pub fn counit(v: &PosetVector) -> Scalar {
    v.coeff(&Poset::empty())
}

thread_local! {
    static ANTIPODES: RefCell<HashMap<Poset, PosetVector>> = RefCell::new(HashMap::new());
}

/// Antipode, from `S(p) = -Σ S(U) · (p \ U)` over proper up-sets `U`.
pub fn antipode(p: &Poset) -> PosetVector {
    if p.is_empty() {
        return PosetVector::one();
    }
    if let Some(hit) = ANTIPODES.with(|c| c.borrow().get(p).cloned()) {
        return hit;
    }
    let mut out = PosetVector::zero();
    for (u, d, m) in splittings(p).iter() {
        if d.is_empty() {
            continue;
        }
        let su = antipode(u);
        let prod = su.product(&PosetVector::from_poset(*d)).expect("sizes add up to |p|");
        out = out.sub(&prod.scale(&Scalar::from(*m as i64)));
    }
    ANTIPODES.with(|c| c.borrow_mut().insert(*p, out.clone()));
    out
}

pub fn antipode_vector(v: &PosetVector) -> PosetVector {
    let mut out = PosetVector::zero();
    for (p, c) in v.terms() {
        out = out.add(&antipode(p).scale(c));
    }
    out
}

/// Coefficient of `ck ⊗ cl` in `Δ(a_{|ck|+|cl|})`, where `series[n]` is `a_n`.
pub fn gamma(series: &[PosetVector], ck: &Poset, cl: &Poset) -> Result<Scalar> {
    let n = ck.len() + cl.len();
    let a = series.get(n).ok_or_else(|| Error::SizeMismatch(format!("series has no term of degree {n}")))?;
    let mut out = Scalar::zero();
    for (p, c) in a.terms() {
        for (u, d, m) in splittings(p).iter() {
            if u == ck && d == cl {
                out += c * Scalar::from(*m as i64);
            }
        }
    }
    Ok(out)
}
