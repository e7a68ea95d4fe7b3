//! Finite posets: labelled relation tables, canonical isomorphism classes and
//! the elementary constructions used by the growth models.

mod canon;
mod enumerate;
mod io;

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use canon::{canonicalize, clear_canonical_cache};
pub use enumerate::{enumerate, enumerate_connected};
pub use io::PosetJson;

/// Largest poset size the library will ever build.
pub const HARD_CAP: usize = 9;

/// Bit mask over the elements of a poset (bit `i` is element `i`).
pub type Mask = u16;

/// Effective size cap: `POSETHOPF_MAX_N` if set and smaller than [`HARD_CAP`].
pub fn max_n() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("POSETHOPF_MAX_N")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.min(HARD_CAP))
            .unwrap_or(HARD_CAP)
    })
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    let cap = max_n();
    if n > cap {
        return Err(Error::SizeExceeded { n, cap });
    }
    Ok(())
}

/// Elements of a mask in increasing order.
pub fn bits_of(mask: Mask) -> impl Iterator<Item = usize> {
    (0..16).filter(move |i| mask >> i & 1 == 1)
}

/// A strict partial order on elements `0..n`, stored as down-set masks.
///
/// `below[j]` has bit `i` set exactly when `i < j` in the order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LabelledPoset {
    n: u8,
    below: [Mask; HARD_CAP],
}

impl LabelledPoset {
    pub fn empty() -> Self {
        LabelledPoset { n: 0, below: [0; HARD_CAP] }
    }

    pub fn antichain(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(LabelledPoset { n: n as u8, below: [0; HARD_CAP] })
    }

    pub fn chain(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut below = [0; HARD_CAP];
        for (j, b) in below.iter_mut().enumerate().take(n) {
            *b = (1u16 << j) - 1;
        }
        Ok(LabelledPoset { n: n as u8, below })
    }

    /// Builds the transitive closure of `pairs`, each `(a, b)` meaning `a < b`.
    /// Elements are numbered from 0.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        check_size(n)?;
        let mut below = [0 as Mask; HARD_CAP];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::DomainError(format!("relation ({a}, {b}) mentions an element outside 0..{n}")));
            }
            if a == b {
                return Err(Error::CycleDetected);
            }
            below[b] |= 1 << a;
        }
        for k in 0..n {
            for j in 0..n {
                if below[j] >> k & 1 == 1 {
                    below[j] |= below[k];
                }
            }
        }
        for (j, b) in below.iter().enumerate().take(n) {
            if b >> j & 1 == 1 {
                return Err(Error::CycleDetected);
            }
        }
        Ok(LabelledPoset { n: n as u8, below })
    }

    /// Raw constructor; `below` must already be transitive and irreflexive.
    pub(crate) fn from_below(n: usize, below: [Mask; HARD_CAP]) -> Self {
        LabelledPoset { n: n as u8, below }
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn full_mask(&self) -> Mask {
        ((1u32 << self.n) - 1) as Mask
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.below[j] >> i & 1 == 1
    }

    pub fn below(&self, j: usize) -> Mask {
        self.below[j]
    }

    pub fn above(&self, i: usize) -> Mask {
        let mut m = 0;
        for j in 0..self.len() {
            if self.below[j] >> i & 1 == 1 {
                m |= 1 << j;
            }
        }
        m
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.less(i, j) || self.less(j, i)
    }

    /// Number of relations `x < j` (the size of the strict down-set of `j`).
    pub fn num_below(&self, j: usize) -> usize {
        self.below[j].count_ones() as usize
    }

    /// Elements covered by `j`.
    pub fn lower_covers(&self, j: usize) -> Mask {
        let b = self.below[j];
        let mut covers = b;
        for i in bits_of(b) {
            covers &= !self.below[i];
        }
        covers
    }

    /// All cover pairs `(a, b)` with `a` covered by `b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.len() {
            for i in bits_of(self.lower_covers(j)) {
                out.push((i, j));
            }
        }
        out.sort();
        out
    }

    /// True when `i < j` implies `i` has the smaller label.
    pub fn is_natural(&self) -> bool {
        (0..self.len()).all(|j| self.below[j] >> j == 0)
    }

    pub fn is_down_set(&self, mask: Mask) -> bool {
        bits_of(mask).all(|j| self.below[j] & !mask == 0)
    }

    pub fn is_up_set(&self, mask: Mask) -> bool {
        self.is_down_set(self.full_mask() & !mask)
    }

    /// Every down-set, as masks in increasing numeric order.
    pub fn down_sets(&self) -> Vec<Mask> {
        (0..=self.full_mask()).filter(|&m| self.is_down_set(m)).collect()
    }

    pub fn up_sets(&self) -> Vec<Mask> {
        let full = self.full_mask();
        self.down_sets().into_iter().map(|d| full & !d).collect()
    }

    /// Smallest down-set containing `mask`.
    pub fn down_closure(&self, mask: Mask) -> Mask {
        bits_of(mask).fold(mask, |acc, i| acc | self.below[i])
    }

    /// Maximal elements of `mask` in the induced order.
    pub fn maximal_in(&self, mask: Mask) -> Mask {
        let mut out = mask;
        for j in bits_of(mask) {
            out &= !self.below[j];
        }
        out
    }

    pub fn minimal_in(&self, mask: Mask) -> Mask {
        bits_of(mask).filter(|&j| self.below[j] & mask == 0).fold(0, |acc, j| acc | 1 << j)
    }

    /// The subposet on `mask`, relabelled in increasing label order.
    pub fn induced(&self, mask: Mask) -> LabelledPoset {
        let elems: Vec<usize> = bits_of(mask).collect();
        let mut below = [0 as Mask; HARD_CAP];
        for (nj, &j) in elems.iter().enumerate() {
            for (ni, &i) in elems.iter().enumerate() {
                if self.less(i, j) {
                    below[nj] |= 1 << ni;
                }
            }
        }
        LabelledPoset { n: elems.len() as u8, below }
    }

    /// Connected components of the comparability graph, as masks.
    pub fn components(&self) -> Vec<Mask> {
        let n = self.len();
        let mut seen: Mask = 0;
        let mut out = Vec::new();
        for start in 0..n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp: Mask = 1 << start;
            loop {
                let mut next = comp;
                for v in bits_of(comp) {
                    next |= self.below[v] | self.above(v);
                }
                if next == comp {
                    break;
                }
                comp = next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Adds a new element `n` lying above exactly the down-closure of `s`.
    pub fn b_s(&self, s: Mask) -> Result<LabelledPoset> {
        let n = self.len();
        check_size(n + 1)?;
        if s & !self.full_mask() != 0 {
            return Err(Error::DomainError("proto-past outside the poset".into()));
        }
        let mut below = self.below;
        below[n] = self.down_closure(s);
        Ok(LabelledPoset { n: n as u8 + 1, below })
    }

    /// Places `other` after `self`, with no relations between them.
    pub fn disjoint_union(&self, other: &LabelledPoset) -> Result<LabelledPoset> {
        let n = self.len();
        let total = n + other.len();
        check_size(total)?;
        let mut below = self.below;
        for j in 0..other.len() {
            below[n + j] = other.below[j] << n;
        }
        Ok(LabelledPoset { n: total as u8, below })
    }

    /// Relabels element `i` as `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> LabelledPoset {
        let mut below = [0 as Mask; HARD_CAP];
        for j in 0..self.len() {
            for i in bits_of(self.below[j]) {
                below[perm[j]] |= 1 << perm[i];
            }
        }
        LabelledPoset { n: self.n, below }
    }

    /// Every element covers at most one element (roots are the minima).
    pub fn is_forest(&self) -> bool {
        (0..self.len()).all(|j| self.lower_covers(j).count_ones() <= 1)
    }

    /// Every element is covered by at most one element (roots are the maxima).
    pub fn is_forest_max_rooted(&self) -> bool {
        (0..self.len()).all(|i| {
            let up = self.above(i);
            self.minimal_in(up).count_ones() <= 1
        })
    }

    /// Packs the relations `i < j` with `i` the smaller label into pair bits,
    /// first pair most significant, as used by [`Poset`].
    pub fn natural_bits(&self) -> u64 {
        let n = self.len();
        let total = n * (n.saturating_sub(1)) / 2;
        let mut bits = 0u64;
        let mut idx = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.less(i, j) {
                    bits |= 1 << (total - 1 - idx);
                }
                idx += 1;
            }
        }
        bits
    }
}

/// An isomorphism class of finite posets, held as its canonical labelling.
///
/// The canonical labelling is natural, so the order is determined by one bit
/// per pair `i < j`. Ordering compares size first, then the pair bits with the
/// first pair most significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poset {
    n: u8,
    bits: u64,
}

impl Poset {
    pub fn empty() -> Self {
        Poset { n: 0, bits: 0 }
    }

    pub fn point() -> Self {
        Poset { n: 1, bits: 0 }
    }

    pub fn from_labelled(p: &LabelledPoset) -> Poset {
        canonicalize(p).0
    }

    pub fn chain(n: usize) -> Result<Poset> {
        Ok(Poset::from_labelled(&LabelledPoset::chain(n)?))
    }

    pub fn antichain(n: usize) -> Result<Poset> {
        Ok(Poset::from_labelled(&LabelledPoset::antichain(n)?))
    }

    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        Ok(Poset::from_labelled(&LabelledPoset::from_relations(n, pairs)?))
    }

    pub(crate) fn from_raw(n: usize, bits: u64) -> Poset {
        Poset { n: n as u8, bits }
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn raw_bits(&self) -> u64 {
        self.bits
    }

    /// Canonical code: size byte followed by the pair bits, big-endian.
    /// Byte-wise comparison agrees with the ordering on [`Poset`].
    pub fn code(&self) -> Vec<u8> {
        let mut out = vec![self.n];
        out.extend_from_slice(&self.bits.to_be_bytes()[3..]);
        out
    }

    /// The canonical natural labelling.
    pub fn labelled(&self) -> LabelledPoset {
        let n = self.len();
        let total = n * (n.saturating_sub(1)) / 2;
        let mut below = [0 as Mask; HARD_CAP];
        let mut idx = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.bits >> (total - 1 - idx) & 1 == 1 {
                    below[j] |= 1 << i;
                }
                idx += 1;
            }
        }
        LabelledPoset::from_below(n, below)
    }

    pub fn is_connected(&self) -> bool {
        self.labelled().is_connected()
    }

    /// Connected components in canonical order (size, then code).
    pub fn components(&self) -> Vec<Poset> {
        let l = self.labelled();
        let mut out: Vec<Poset> = l.components().into_iter().map(|m| Poset::from_labelled(&l.induced(m))).collect();
        out.sort();
        out
    }

    pub fn disjoint_union(&self, other: &Poset) -> Result<Poset> {
        Ok(Poset::from_labelled(&self.labelled().disjoint_union(&other.labelled())?))
    }

    pub fn is_forest(&self) -> bool {
        self.labelled().is_forest()
    }

    pub fn num_relations(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn num_covers(&self) -> usize {
        let l = self.labelled();
        (0..self.len()).map(|j| l.lower_covers(j).count_ones() as usize).sum()
    }

    /// Text form `n:a-b,c-d` listing cover relations of the canonical labelling,
    /// numbered from 1.
    pub fn to_text(&self) -> String {
        io::to_text(&self.labelled())
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({})", self.to_text())
    }
}

impl std::str::FromStr for Poset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Poset> {
        Ok(Poset::from_labelled(&io::parse_poset(s)?))
    }
}

impl std::str::FromStr for LabelledPoset {
    type Err = Error;
    fn from_str(s: &str) -> Result<LabelledPoset> {
        io::parse_poset(s)
    }
}
