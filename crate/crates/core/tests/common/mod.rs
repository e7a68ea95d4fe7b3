//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! library's canonical forms, template counts or growth code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use posethopf::{Poset, Scalar};

/// Strict order on `0..n` as an adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rel {
    pub n: usize,
    pub less: Vec<Vec<bool>>,
}

impl Rel {
    pub fn from_poset(p: &Poset) -> Rel {
        let l = p.labelled();
        let n = l.len();
        let less = (0..n).map(|i| (0..n).map(|j| l.less(i, j)).collect()).collect();
        Rel { n, less }
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.n)
            .all(|i| (0..self.n).all(|j| !self.less[i][j] || (0..self.n).all(|k| !self.less[j][k] || self.less[i][k])))
    }

    pub fn closure(mut self) -> Rel {
        for k in 0..self.n {
            for i in 0..self.n {
                for j in 0..self.n {
                    if self.less[i][k] && self.less[k][j] {
                        self.less[i][j] = true;
                    }
                }
            }
        }
        self
    }

    fn code_under(&self, perm: &[usize]) -> u64 {
        let mut code = 0u64;
        for i in 0..self.n {
            for j in 0..self.n {
                code <<= 1;
                if self.less[perm[i]][perm[j]] {
                    code |= 1;
                }
            }
        }
        code
    }

    /// Smallest relation code over all relabellings; equal iff isomorphic.
    pub fn brute_code(&self) -> (usize, u64) {
        let mut best = u64::MAX;
        for perm in permutations(self.n) {
            best = best.min(self.code_under(&perm));
        }
        (self.n, best)
    }

    pub fn automorphisms(&self) -> usize {
        let id: Vec<usize> = (0..self.n).collect();
        let base = self.code_under(&id);
        permutations(self.n).filter(|p| self.code_under(p) == base).count()
    }

    /// Number of linear extensions, by dynamic programming over down-sets.
    pub fn linear_extensions(&self) -> u128 {
        let n = self.n;
        let mut ways = vec![0u128; 1 << n];
        ways[0] = 1;
        for set in 0..(1usize << n) {
            if ways[set] == 0 {
                continue;
            }
            for x in 0..n {
                if set >> x & 1 == 1 {
                    continue;
                }
                if (0..n).all(|y| !self.less[y][x] || set >> y & 1 == 1) {
                    ways[set | 1 << x] += ways[set];
                }
            }
        }
        ways[(1 << n) - 1]
    }

    /// Number of natural labellings up to isomorphism: `e(P) / |Aut(P)|`.
    pub fn psi(&self) -> u128 {
        self.linear_extensions() / self.automorphisms() as u128
    }

    pub fn relations(&self) -> usize {
        self.less.iter().flatten().filter(|&&b| b).count()
    }

    pub fn links(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                if self.less[i][j] && !(0..self.n).any(|k| self.less[i][k] && self.less[k][j]) {
                    count += 1;
                }
            }
        }
        count
    }
}

pub fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut first = true;
    std::iter::from_fn(move || {
        if first {
            first = false;
            return Some(p.clone());
        }
        let i = (1..p.len()).rev().find(|&i| p[i - 1] < p[i])?;
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        Some(p.clone())
    })
}

/// Every poset on `n` elements up to isomorphism, keyed by brute-force code,
/// from all transitive relations compatible with the natural order.
pub fn brute_posets(n: usize) -> BTreeMap<(usize, u64), Rel> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = BTreeMap::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut less = vec![vec![false; n]; n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                less[i][j] = true;
            }
        }
        let r = Rel { n, less };
        if r.is_transitive() {
            out.entry(r.brute_code()).or_insert(r);
        }
    }
    out
}

/// Distribution of labelled classical sequential growth with couplings `t`,
/// summed over every growth history and grouped by brute-force code.
/// Probabilities when `normalise`, weights otherwise.
pub fn labelled_growth(n: usize, t: &[Scalar], normalise: bool) -> BTreeMap<(usize, u64), Scalar> {
    let coupling = |k: usize| t.get(k).cloned().unwrap_or_else(Scalar::zero);
    let mut states: Vec<(Rel, Scalar)> = vec![(Rel { n: 1, less: vec![vec![false]] }, Scalar::one())];
    for m in 1..n {
        let z: Scalar = (0..=m).map(|k| Scalar::from(binom(m, k) as i64) * coupling(k)).sum();
        let mut next = Vec::new();
        for (r, w) in &states {
            for s in 0u32..(1 << m) {
                let mut weight = coupling(s.count_ones() as usize);
                if weight.is_zero() {
                    continue;
                }
                if normalise {
                    weight = weight.exact_div(&z).unwrap();
                }
                let mut less = r.less.clone();
                for row in less.iter_mut() {
                    row.push(false);
                }
                less.push(vec![false; m + 1]);
                for i in 0..m {
                    if s >> i & 1 == 1 {
                        less[i][m] = true;
                    }
                }
                let child = Rel { n: m + 1, less }.closure();
                next.push((child, w * &weight));
            }
        }
        states = next;
    }
    let mut out: BTreeMap<(usize, u64), Scalar> = BTreeMap::new();
    for (r, w) in states {
        *out.entry(r.brute_code()).or_default() += w;
    }
    out
}

/// Transitive percolation on `n` labelled elements: each pair `i < j` is
/// related with probability `1 - q`, then the order is closed transitively.
pub fn labelled_percolation(n: usize) -> BTreeMap<(usize, u64), Scalar> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let q = Scalar::q();
    let p = Scalar::one() - &q;
    let mut out: BTreeMap<(usize, u64), Scalar> = BTreeMap::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut less = vec![vec![false; n]; n];
        let mut edges = 0u32;
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                less[i][j] = true;
                edges += 1;
            }
        }
        let r = Rel { n, less }.closure();
        let w = p.pow(edges) * q.pow(pairs.len() as u32 - edges);
        *out.entry(r.brute_code()).or_default() += w;
    }
    out
}

pub fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn scalar(n: i64, d: i64) -> Scalar {
    Scalar::from_rational(rational(n, d))
}

pub fn is_one(x: &BigRational) -> bool {
    x.is_one()
}
