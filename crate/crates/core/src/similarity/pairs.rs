use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index pairs `(i, j)` with `i < j`, ordered by `i` then `j`.
pub fn canonical_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

/// One score per unordered item pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScores {
    pub context: String,
    pub method: String,
    pub seed: Option<u64>,
    pub pairs: Vec<(String, String)>,
    pub scores: Vec<f64>,
}

impl PairScores {
    pub fn new(
        context: impl Into<String>,
        method: impl Into<String>,
        pairs: Vec<(String, String)>,
        scores: Vec<f64>,
    ) -> Result<Self> {
        if pairs.len() != scores.len() {
            return Err(Error::Mismatch(format!(
                "{} pairs but {} scores",
                pairs.len(),
                scores.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for (a, b) in &pairs {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-pair ({a}, {a})")));
            }
            if !seen.insert(key(a, b)) {
                return Err(Error::InvalidArgument(format!("duplicate pair ({a}, {b})")));
            }
        }
        Ok(PairScores {
            context: context.into(),
            method: method.into(),
            seed: None,
            pairs,
            scores,
        })
    }

    /// Scores for the canonical pairs of `items`, in canonical order.
    pub fn from_items<S: AsRef<str>>(
        context: impl Into<String>,
        method: impl Into<String>,
        items: &[S],
        scores: Vec<f64>,
    ) -> Result<Self> {
        let pairs = canonical_pairs(items.len())
            .into_iter()
            .map(|(i, j)| (items[i].as_ref().to_owned(), items[j].as_ref().to_owned()))
            .collect();
        PairScores::new(context, method, pairs, scores)
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Score of the unordered pair `{a, b}`.
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        self.pairs
            .iter()
            .position(|(x, y)| (x == a && y == b) || (x == b && y == a))
            .map(|i| self.scores[i])
    }

    /// This object's scores reordered to follow `reference`'s pairs.
    pub fn aligned_to(&self, reference: &PairScores) -> Result<Vec<f64>> {
        let lookup: HashMap<(String, String), f64> = self
            .pairs
            .iter()
            .zip(&self.scores)
            .map(|((a, b), &s)| (key(a, b), s))
            .collect();
        if lookup.len() != reference.len() {
            return Err(Error::Mismatch(format!(
                "{} pairs vs {} pairs",
                lookup.len(),
                reference.len()
            )));
        }
        reference
            .pairs
            .iter()
            .map(|(a, b)| {
                lookup
                    .get(&key(a, b))
                    .copied()
                    .ok_or_else(|| Error::MissingPair(a.clone(), b.clone()))
            })
            .collect()
    }

    /// True when both cover the same unordered pairs in the same order.
    pub fn same_pairs(&self, other: &PairScores) -> bool {
        self.pairs.len() == other.pairs.len()
            && self
                .pairs
                .iter()
                .zip(&other.pairs)
                .all(|((a, b), (c, d))| key(a, b) == key(c, d))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    context: String,
    item_a: String,
    item_b: String,
    score: f64,
    method: String,
    seed: Option<u64>,
}

/// Writes `context,item_a,item_b,score,method,seed` rows.
pub fn write_pair_scores<W: Write>(w: W, sets: &[&PairScores]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for s in sets {
        for ((a, b), &score) in s.pairs.iter().zip(&s.scores) {
            out.serialize(Row {
                context: s.context.clone(),
                item_a: a.clone(),
                item_b: b.clone(),
                score,
                method: s.method.clone(),
                seed: s.seed,
            })?;
        }
    }
    out.flush().map_err(|e| Error::io("pair scores", e))?;
    Ok(())
}

/// Reads pair-score CSV, grouping rows by (context, method, seed) in order
/// of first appearance.
pub fn read_pair_scores<R: Read>(r: R) -> Result<Vec<PairScores>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut groups: Vec<PairScores> = Vec::new();
    for row in rdr.deserialize() {
        let row: Row = row?;
        let pos = groups
            .iter()
            .position(|g| g.context == row.context && g.method == row.method && g.seed == row.seed);
        let g = match pos {
            Some(p) => &mut groups[p],
            None => {
                groups.push(PairScores {
                    context: row.context.clone(),
                    method: row.method.clone(),
                    seed: row.seed,
                    pairs: Vec::new(),
                    scores: Vec::new(),
                });
                groups.last_mut().expect("just pushed")
            }
        };
        g.pairs.push((row.item_a, row.item_b));
        g.scores.push(row.score);
    }
    groups
        .into_iter()
        .map(|g| {
            let seed = g.seed;
            PairScores::new(g.context, g.method, g.pairs, g.scores).map(|p| p.with_seed(seed))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_counts() {
        assert_eq!(canonical_pairs(10).len(), 45);
        assert_eq!(canonical_pairs(3), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(canonical_pairs(1).is_empty());
    }

    #[test]
    fn lookup_is_unordered() {
        let p = PairScores::from_items("c", "m", &["a", "b", "c"], vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.get("b", "a"), Some(1.0));
        assert_eq!(p.get("c", "b"), Some(3.0));
        assert_eq!(p.get("a", "z"), None);
    }

    #[test]
    fn rejects_self_and_duplicate_pairs() {
        let s = |a: &str, b: &str| (a.to_owned(), b.to_owned());
        assert!(PairScores::new("c", "m", vec![s("a", "a")], vec![1.0]).is_err());
        assert!(PairScores::new("c", "m", vec![s("a", "b"), s("b", "a")], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn alignment_follows_reference() {
        let s = |a: &str, b: &str| (a.to_owned(), b.to_owned());
        let x = PairScores::new("c", "m", vec![s("b", "a"), s("c", "a")], vec![1.0, 2.0]).unwrap();
        let r = PairScores::new("c", "t", vec![s("a", "c"), s("a", "b")], vec![0.0, 0.0]).unwrap();
        assert_eq!(x.aligned_to(&r).unwrap(), vec![2.0, 1.0]);
    }

    #[test]
    fn csv_round_trip() {
        let a = PairScores::from_items("nature", "cosine", &["bear", "cat", "deer"], vec![0.5, -0.25, 1.0])
            .unwrap()
            .with_seed(Some(3));
        let b = PairScores::from_items("nature", "truth", &["bear", "cat", "deer"], vec![1.0, 2.0, 3.0]).unwrap();
        let mut buf = Vec::new();
        write_pair_scores(&mut buf, &[&a, &b]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("context,item_a,item_b,score,method,seed\n"));
        let back = read_pair_scores(buf.as_slice()).unwrap();
        assert_eq!(back, vec![a, b]);
    }
}
