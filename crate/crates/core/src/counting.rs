//! Templates (natural labellings), integer and forest partitions, shuffles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poset::{LabelledPoset, Mask, Poset};

/// Distinct naturally labelled posets isomorphic to `p`.
///
/// Each linear extension of the canonical labelling is read as a relabelling;
/// two extensions give the same template exactly when they differ by an
/// automorphism.
pub fn templates(p: &Poset) -> Vec<LabelledPoset> {
    let l = p.labelled();
    let n = l.len();
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::new();
    let mut pos = vec![0usize; n];
    extend(&l, 0, 0, &mut pos, &mut |pos| {
        let relabelled = l.permute(pos);
        if seen.insert(relabelled.natural_bits()) {
            out.push(relabelled);
        }
    });
    out
}

fn extend(l: &LabelledPoset, placed: Mask, next: usize, pos: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    let n = l.len();
    if next == n {
        f(pos);
        return;
    }
    for v in 0..n {
        if placed >> v & 1 == 0 && l.below(v) & !placed == 0 {
            pos[v] = next;
            extend(l, placed | 1 << v, next + 1, pos, f);
        }
    }
}

/// Number of templates of `p`.
pub fn num_templates(p: &Poset) -> usize {
    templates(p).len()
}

/// Integer partitions of `n` with parts in non-increasing order, listed in
/// reverse lexicographic order (`[n]` first).
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Multiplicities of the values in `items`.
pub fn multiplicities<T: Ord + Clone>(items: &[T]) -> BTreeMap<T, usize> {
    let mut m = BTreeMap::new();
    for x in items {
        *m.entry(x.clone()).or_insert(0) += 1;
    }
    m
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Product of the factorials of the multiplicities in `items`.
pub fn multiplicity_factorial<T: Ord + Clone>(items: &[T]) -> BigInt {
    multiplicities(items).values().map(|&m| factorial(m)).product()
}

/// A partition of a forest into subforests, up to the order of blocks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ForestPartition {
    /// Blocks in non-increasing order of (size, canonical form).
    pub blocks: Vec<Poset>,
}

impl ForestPartition {
    /// Block sizes in non-increasing order.
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Poset::len).collect()
    }

    /// Number of blocks isomorphic to `p`.
    pub fn multiplicity(&self, p: &Poset) -> usize {
        self.blocks.iter().filter(|b| *b == p).count()
    }
}

/// Ways of grouping the trees of a forest into subforests, without repeats.
///
/// The forest must have every non-root element covering exactly one element.
pub fn forest_partitions(f: &Poset) -> Result<Vec<ForestPartition>> {
    if !f.is_forest() {
        return Err(Error::NotAForest);
    }
    let comps = f.components();
    let mut out: BTreeSet<ForestPartition> = BTreeSet::new();
    for blocks in set_partitions(comps.len()) {
        let mut posets = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut acc = Poset::empty();
            for i in block {
                acc = acc.disjoint_union(&comps[i])?;
            }
            posets.push(acc);
        }
        posets.sort_by(|a, b| b.cmp(a));
        out.insert(ForestPartition { blocks: posets });
    }
    Ok(out.into_iter().rev().collect())
}

/// Set partitions of `0..n`, each block in increasing order.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// One interleaving of words of lengths `k_1..k_d` with a word of length `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleStats {
    /// Letter `i < d` belongs to the `i`-th word, letter `d` to the last one.
    pub word: Vec<u8>,
    /// `v[i][x]`: letters of the last word placed before letter `x` of word `i`.
    pub v: Vec<Vec<u32>>,
}

/// Iterator over all shuffles of `k_1..k_d` with `l`, in lexicographic order
/// of the interleaving word.
pub struct Shuffles {
    word: Option<Vec<u8>>,
    d: usize,
}

pub fn shuffles(k: &[usize], l: usize) -> Shuffles {
    let d = k.len();
    let mut word = Vec::new();
    for (i, &ki) in k.iter().enumerate() {
        word.extend(std::iter::repeat_n(i as u8, ki));
    }
    word.extend(std::iter::repeat_n(d as u8, l));
    Shuffles { word: Some(word), d }
}

impl Iterator for Shuffles {
    type Item = ShuffleStats;

    fn next(&mut self) -> Option<ShuffleStats> {
        let word = self.word.take()?;
        let mut v = vec![Vec::new(); self.d];
        let mut seen_d = 0u32;
        for &c in &word {
            if c as usize == self.d {
                seen_d += 1;
            } else {
                v[c as usize].push(seen_d);
            }
        }
        let mut next = word.clone();
        if next_permutation(&mut next) {
            self.word = Some(next);
        }
        Some(ShuffleStats { word, v })
    }
}

fn next_permutation(w: &mut [u8]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}
