//! Canonical labelling by colour refinement and individualisation.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{bits_of, LabelledPoset, Mask, Poset, HARD_CAP};

type Perm = [u8; HARD_CAP];

const CACHE_LIMIT: usize = 1 << 21;

thread_local! {
    static CACHE: RefCell<HashMap<LabelledPoset, (Poset, Perm)>> = RefCell::new(HashMap::new());
}

pub fn clear_canonical_cache() {
    CACHE.with(|c| c.borrow_mut().clear());
}

/// Canonical form of `p` and the relabelling `perm` with `perm[i]` the
/// canonical position of element `i`.
///
/// Two labelled posets are isomorphic exactly when their canonical forms agree,
/// and applying `perm` to `p` yields the canonical labelling.
pub fn canonicalize(p: &LabelledPoset) -> (Poset, Vec<usize>) {
    let (poset, perm) = cached(p);
    (poset, perm[..p.len()].iter().map(|&x| x as usize).collect())
}

fn cached(p: &LabelledPoset) -> (Poset, Perm) {
    if let Some(hit) = CACHE.with(|c| c.borrow().get(p).copied()) {
        return hit;
    }
    let out = compute(p);
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(*p, out);
    });
    out
}

fn compute(p: &LabelledPoset) -> (Poset, Perm) {
    let n = p.len();
    let mut perm = [0u8; HARD_CAP];
    if n <= 1 {
        return (Poset::from_raw(n, 0), perm);
    }
    let mut parts: Vec<(usize, u64, Vec<usize>)> = p
        .components()
        .into_iter()
        .map(|mask| {
            let elems: Vec<usize> = bits_of(mask).collect();
            let sub = p.induced(mask);
            let (code, local) = canon_connected(&sub);
            let order = {
                let mut o = vec![0; elems.len()];
                for (li, &pos) in local.iter().enumerate().take(elems.len()) {
                    o[pos as usize] = elems[li];
                }
                o
            };
            (elems.len(), code, order)
        })
        .collect();
    parts.sort_by_key(|a| (a.0, a.1));
    let mut offset = 0;
    for (_, _, order) in &parts {
        for (pos, &e) in order.iter().enumerate() {
            perm[e] = (offset + pos) as u8;
        }
        offset += order.len();
    }
    let idx: Vec<usize> = perm[..n].iter().map(|&x| x as usize).collect();
    let relabelled = p.permute(&idx);
    (Poset::from_raw(n, relabelled.natural_bits()), perm)
}

/// Canonical pair bits of a connected poset and its relabelling.
fn canon_connected(p: &LabelledPoset) -> (u64, Perm) {
    let n = p.len();
    if n == 1 {
        return (0, [0; HARD_CAP]);
    }
    let above: Vec<Mask> = (0..n).map(|i| p.above(i)).collect();
    let below: Vec<Mask> = (0..n).map(|j| p.below(j)).collect();

    // Height first: it keeps every leaf labelling natural.
    let mut height = vec![0u32; n];
    loop {
        let mut changed = false;
        for j in 0..n {
            for i in bits_of(below[j]) {
                if height[i] + 1 > height[j] {
                    height[j] = height[i] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let keys: Vec<Vec<u32>> = (0..n).map(|v| vec![height[v], below[v].count_ones(), above[v].count_ones()]).collect();
    let colours = refine(&rank(&keys), &below, &above);

    let mut search = Search { p, below: &below, above: &above, best: None };
    search.run(colours);
    let (code, perm) = search.best.expect("search visits at least one leaf");
    (code, perm)
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("key present") as u32).collect()
}

fn num_cells(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn refine(colours: &[u32], below: &[Mask], above: &[Mask]) -> Vec<u32> {
    let mut current = colours.to_vec();
    let mut cells = num_cells(&current);
    loop {
        let sigs: Vec<Vec<u32>> = (0..current.len())
            .map(|v| {
                let mut down: Vec<u32> = bits_of(below[v]).map(|u| current[u]).collect();
                let mut up: Vec<u32> = bits_of(above[v]).map(|u| current[u]).collect();
                down.sort_unstable();
                up.sort_unstable();
                let mut sig = vec![current[v], down.len() as u32];
                sig.extend(down);
                sig.extend(up);
                sig
            })
            .collect();
        let next = rank(&sigs);
        let next_cells = num_cells(&next);
        current = next;
        if next_cells == cells {
            return current;
        }
        cells = next_cells;
    }
}

struct Search<'a> {
    p: &'a LabelledPoset,
    below: &'a [Mask],
    above: &'a [Mask],
    best: Option<(u64, Perm)>,
}

impl Search<'_> {
    fn run(&mut self, colours: Vec<u32>) {
        let n = colours.len();
        if num_cells(&colours) == n {
            self.leaf(&colours);
            return;
        }
        let mut counts = vec![0usize; n];
        for &c in &colours {
            counts[c as usize] += 1;
        }
        let target = (0..n).find(|&c| counts[c] > 1).expect("non-discrete colouring") as u32;
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if colours[v] != target {
                continue;
            }
            if tried.iter().any(|&u| self.below[u] == self.below[v] && self.above[u] == self.above[v]) {
                continue;
            }
            tried.push(v);
            let split: Vec<u32> = (0..n).map(|w| 2 * colours[w] + u32::from(colours[w] == target && w != v)).collect();
            let split = rank(&split);
            self.run(refine(&split, self.below, self.above));
        }
    }

    fn leaf(&mut self, colours: &[u32]) {
        let n = colours.len();
        let mut perm = [0u8; HARD_CAP];
        let mut idx = vec![0usize; n];
        for v in 0..n {
            perm[v] = colours[v] as u8;
            idx[v] = colours[v] as usize;
        }
        let code = self.p.permute(&idx).natural_bits();
        match &self.best {
            Some((b, _)) if *b >= code => {}
            _ => self.best = Some((code, perm)),
        }
    }
}
