use serde::{Deserialize, Serialize};

use super::{LabelledPoset, Poset};
use crate::error::{Error, Result};

/// JSON shape `{"n": 4, "covers": [[1, 2], [3, 4]]}`, elements numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
}

impl PosetJson {
    pub fn from_labelled(p: &LabelledPoset) -> Self {
        PosetJson { n: p.len(), covers: p.covers().into_iter().map(|(a, b)| [a + 1, b + 1]).collect() }
    }

    pub fn from_poset(p: &Poset) -> Self {
        Self::from_labelled(&p.labelled())
    }

    pub fn to_labelled(&self) -> Result<LabelledPoset> {
        let pairs = one_based(self.n, self.covers.iter().map(|c| (c[0], c[1])))?;
        LabelledPoset::from_relations(self.n, &pairs)
    }
}

fn one_based(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Result<Vec<(usize, usize)>> {
    pairs
        .map(|(a, b)| {
            if a == 0 || b == 0 || a > n || b > n {
                Err(Error::Parse(format!("relation {a}-{b} is outside 1..{n}")))
            } else {
                Ok((a - 1, b - 1))
            }
        })
        .collect()
}

pub(super) fn to_text(p: &LabelledPoset) -> String {
    let covers: Vec<String> = p.covers().into_iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect();
    format!("{}:{}", p.len(), covers.join(","))
}

/// Accepts the text form `n:a-b,c-d` or the JSON object form.
pub(super) fn parse_poset(s: &str) -> Result<LabelledPoset> {
    let s = s.trim();
    if s.starts_with('{') {
        let j: PosetJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        return j.to_labelled();
    }
    let (n, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected `n:a-b,...`, got `{s}`")))?;
    let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad size `{n}`")))?;
    let mut pairs = Vec::new();
    for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (a, b) = item.split_once('-').ok_or_else(|| Error::Parse(format!("bad relation `{item}`")))?;
        let a: usize = a.trim().parse().map_err(|_| Error::Parse(format!("bad element `{a}`")))?;
        let b: usize = b.trim().parse().map_err(|_| Error::Parse(format!("bad element `{b}`")))?;
        pairs.push((a, b));
    }
    let pairs = one_based(n, pairs.into_iter())?;
    LabelledPoset::from_relations(n, &pairs)
}
