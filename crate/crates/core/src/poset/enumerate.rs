use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use super::{check_size, Poset};
use crate::error::{Error, Result};

/// Largest size for which full enumeration is offered.
pub const ENUMERATION_CAP: usize = 8;

static LEVELS: Mutex<Vec<Arc<Vec<Poset>>>> = Mutex::new(Vec::new());

/// All posets of size `n`, sorted, each exactly once.
///
/// Every poset of size `n` arises from one of size `n - 1` by adding a new
/// maximal element above some down-set, so levels are built from the previous
/// one and cached.
pub fn enumerate(n: usize) -> Result<Arc<Vec<Poset>>> {
    if n > ENUMERATION_CAP {
        return Err(Error::SizeExceeded { n, cap: ENUMERATION_CAP });
    }
    check_size(n)?;
    if let Some(level) = LEVELS.lock().expect("poisoned").get(n) {
        return Ok(level.clone());
    }
    let mut levels = LEVELS.lock().expect("poisoned").clone();
    if levels.is_empty() {
        levels.push(Arc::new(vec![Poset::empty()]));
    }
    while levels.len() <= n {
        let prev = levels.last().expect("nonempty");
        let mut next = BTreeSet::new();
        for p in prev.iter() {
            let l = p.labelled();
            for d in l.down_sets() {
                next.insert(Poset::from_labelled(&l.b_s(d)?));
            }
        }
        levels.push(Arc::new(next.into_iter().collect()));
    }
    let out = levels[n].clone();
    let mut shared = LEVELS.lock().expect("poisoned");
    if shared.len() < levels.len() {
        *shared = levels;
    }
    Ok(out)
}

/// Connected posets of size `n`, sorted. The empty poset is not connected.
pub fn enumerate_connected(n: usize) -> Result<Vec<Poset>> {
    Ok(enumerate(n)?.iter().filter(|p| !p.is_empty() && p.is_connected()).copied().collect())
}
