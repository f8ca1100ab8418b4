use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::correlation::pearson;
use crate::error::{Error, Result};
use crate::similarity::{canonical_pairs, PairScores};

/// Whether cells are item pairs or (feature, item) ratings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JudgmentKind {
    Pairs,
    Features,
}

/// A cell: an unordered item pair (stored sorted) or `(feature, item)`.
pub type Cell = (String, String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub participant: String,
    pub cell: Cell,
    pub rating: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    NoVariance,
    LowAgreement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Removal {
    pub participant: String,
    pub reason: RemovalReason,
    /// Leave-one-out correlation at removal time (low-agreement removals).
    pub loo_r: Option<f64>,
}

/// Likert responses for one context (and, for feature ratings, one
/// feature), with the set of participants that survive filtering.
#[derive(Debug, Clone, PartialEq)]
pub struct JudgmentSet {
    pub context: String,
    pub kind: JudgmentKind,
    responses: Vec<Response>,
    retained: BTreeSet<String>,
    removed: Vec<Removal>,
}

pub fn pair_cell(a: &str, b: &str) -> Cell {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

impl JudgmentSet {
    /// All participants start out retained.
    pub fn new(context: impl Into<String>, kind: JudgmentKind, responses: Vec<Response>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &responses {
            if !(1..=5).contains(&r.rating) {
                return Err(Error::InvalidArgument(format!(
                    "rating {} by {} outside 1..=5",
                    r.rating, r.participant
                )));
            }
            if !seen.insert((&r.participant, &r.cell)) {
                return Err(Error::InvalidArgument(format!(
                    "participant {} rated ({}, {}) twice",
                    r.participant, r.cell.0, r.cell.1
                )));
            }
        }
        let retained = responses.iter().map(|r| r.participant.clone()).collect();
        Ok(JudgmentSet {
            context: context.into(),
            kind,
            responses,
            retained,
            removed: Vec::new(),
        })
    }

    /// Builds a pair-judgment set from `(participant, item_a, item_b, rating)`.
    pub fn from_pair_ratings<S: AsRef<str>>(
        context: &str,
        rows: impl IntoIterator<Item = (S, S, S, u8)>,
    ) -> Result<Self> {
        let responses = rows
            .into_iter()
            .map(|(p, a, b, r)| Response {
                participant: p.as_ref().to_owned(),
                cell: pair_cell(a.as_ref(), b.as_ref()),
                rating: r,
            })
            .collect();
        JudgmentSet::new(context, JudgmentKind::Pairs, responses)
    }

    pub fn responses(&self) -> &[Response] {
        &self.responses
    }

    pub fn retained(&self) -> &BTreeSet<String> {
        &self.retained
    }

    pub fn removed(&self) -> &[Removal] {
        &self.removed
    }

    pub fn participants(&self) -> BTreeSet<String> {
        self.responses.iter().map(|r| r.participant.clone()).collect()
    }

    fn by_participant(&self) -> BTreeMap<&str, BTreeMap<&Cell, f64>> {
        let mut out: BTreeMap<&str, BTreeMap<&Cell, f64>> = BTreeMap::new();
        for r in &self.responses {
            out.entry(r.participant.as_str())
                .or_default()
                .insert(&r.cell, r.rating as f64);
        }
        out
    }
}

type Table<'a> = BTreeMap<&'a str, BTreeMap<&'a Cell, f64>>;

/// Correlation of `who` with the per-cell mean of everyone else in `pool`,
/// over the cells `who` answered. `None` when it is undefined.
fn loo_r(table: &Table<'_>, pool: &BTreeSet<&str>, who: &str) -> Option<f64> {
    let mine = table.get(who)?;
    let mut xs = Vec::with_capacity(mine.len());
    let mut ys = Vec::with_capacity(mine.len());
    for (cell, &rating) in mine {
        let (mut sum, mut n) = (0.0, 0usize);
        for other in pool.iter().filter(|p| **p != who) {
            if let Some(v) = table[other].get(cell) {
                sum += v;
                n += 1;
            }
        }
        if n > 0 {
            xs.push(rating);
            ys.push(sum / n as f64);
        }
    }
    pearson(&xs, &ys).ok()
}

/// Leave-one-out agreement of every retained participant.
pub fn loo_correlations(j: &JudgmentSet) -> BTreeMap<String, Option<f64>> {
    let table = j.by_participant();
    let pool: BTreeSet<&str> = j.retained.iter().map(String::as_str).collect();
    pool.iter()
        .map(|p| (p.to_string(), loo_r(&table, &pool, p)))
        .collect()
}

/// Drops participants with constant answers, then repeatedly drops the one
/// least correlated with the mean of the others until everyone left has a
/// leave-one-out Pearson r of at least `threshold`.
///
/// An undefined leave-one-out correlation counts as the lowest possible.
pub fn filter_participants(j: &JudgmentSet, threshold: f64) -> Result<JudgmentSet> {
    let table = j.by_participant();
    let mut pool: BTreeSet<&str> = j.retained.iter().map(String::as_str).collect();
    if pool.len() < 2 {
        return Err(Error::TooFewParticipants(pool.len()));
    }
    let mut removed = j.removed.clone();

    let flat: Vec<&str> = pool
        .iter()
        .copied()
        .filter(|p| {
            let vals: Vec<f64> = table[p].values().copied().collect();
            vals.iter().all(|v| *v == vals[0])
        })
        .collect();
    for p in flat {
        pool.remove(p);
        removed.push(Removal {
            participant: p.to_owned(),
            reason: RemovalReason::NoVariance,
            loo_r: None,
        });
    }

    loop {
        if pool.len() < 2 {
            return Err(Error::TooFewParticipants(pool.len()));
        }
        let worst = pool
            .iter()
            .map(|p| (*p, loo_r(&table, &pool, p)))
            .min_by(|a, b| {
                let ka = a.1.unwrap_or(f64::NEG_INFINITY);
                let kb = b.1.unwrap_or(f64::NEG_INFINITY);
                ka.total_cmp(&kb).then_with(|| a.0.cmp(b.0))
            })
            .expect("pool is non-empty");
        match worst.1 {
            Some(r) if r >= threshold => break,
            r => {
                pool.remove(worst.0);
                removed.push(Removal {
                    participant: worst.0.to_owned(),
                    reason: RemovalReason::LowAgreement,
                    loo_r: r,
                });
            }
        }
    }

    Ok(JudgmentSet {
        context: j.context.clone(),
        kind: j.kind,
        responses: j.responses.clone(),
        retained: pool.into_iter().map(str::to_owned).collect(),
        removed,
    })
}

/// Mean rating per cell over retained participants.
pub fn mean_truth(j: &JudgmentSet) -> BTreeMap<Cell, f64> {
    let mut acc: BTreeMap<&Cell, (f64, usize)> = BTreeMap::new();
    for r in j.responses.iter().filter(|r| j.retained.contains(&r.participant)) {
        let e = acc.entry(&r.cell).or_default();
        e.0 += r.rating as f64;
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(c, (s, n))| (c.clone(), s / n as f64))
        .collect()
}

/// Mean similarity for every canonical pair of `items`.
pub fn mean_pair_scores<S: AsRef<str>>(j: &JudgmentSet, items: &[S]) -> Result<PairScores> {
    let means = mean_truth(j);
    let scores = canonical_pairs(items.len())
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (items[a].as_ref(), items[b].as_ref());
            means
                .get(&pair_cell(a, b))
                .copied()
                .ok_or_else(|| Error::EmptyCell(a.to_owned(), b.to_owned()))
        })
        .collect::<Result<Vec<f64>>>()?;
    PairScores::from_items(&j.context, "human", items, scores)
}

/// Mean rating of each item on `feature`.
pub fn mean_feature_ratings<S: AsRef<str>>(
    j: &JudgmentSet,
    feature: &str,
    items: &[S],
) -> Result<Vec<f64>> {
    let means = mean_truth(j);
    items
        .iter()
        .map(|i| {
            means
                .get(&(feature.to_owned(), i.as_ref().to_owned()))
                .copied()
                .ok_or_else(|| Error::EmptyCell(feature.to_owned(), i.as_ref().to_owned()))
        })
        .collect()
}

/// Human agreement ceiling and the share of it a model reaches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reliability {
    pub ceiling: f64,
    pub fraction: f64,
}

/// Ceiling = mean leave-one-out Pearson r over retained participants.
pub fn reliability_ceiling(j: &JudgmentSet, model_r: f64) -> Result<Reliability> {
    if j.retained.len() < 2 {
        return Err(Error::TooFewParticipants(j.retained.len()));
    }
    let rs = loo_correlations(j);
    let defined: Vec<f64> = rs.values().filter_map(|r| *r).collect();
    if defined.is_empty() {
        return Err(Error::UndefinedCorrelation("no participant has a defined agreement"));
    }
    let ceiling = defined.iter().sum::<f64>() / defined.len() as f64;
    Ok(Reliability {
        ceiling,
        fraction: model_r / ceiling,
    })
}

fn parse_rating(s: &str, line: usize, source: &str) -> Result<u8> {
    let bad = || Error::Malformed {
        source_name: source.to_owned(),
        line,
        message: format!("rating `{s}` is not an integer in 1..=5"),
    };
    let v: u8 = s.trim().parse().map_err(|_| bad())?;
    if (1..=5).contains(&v) {
        Ok(v)
    } else {
        Err(bad())
    }
}

#[derive(Deserialize)]
struct PairRow {
    participant_id: String,
    context: String,
    item_a: String,
    item_b: String,
    rating: String,
}

#[derive(Deserialize)]
struct FeatureRow {
    participant_id: String,
    context: String,
    feature: String,
    item: String,
    rating: String,
}

/// Reads `participant_id,context,item_a,item_b,rating` into one set per
/// context.
pub fn read_judgments<R: Read>(r: R, source: &str) -> Result<BTreeMap<String, JudgmentSet>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut groups: BTreeMap<String, Vec<Response>> = BTreeMap::new();
    for (i, row) in rdr.deserialize().enumerate() {
        let line = i + 2;
        let row: PairRow = row.map_err(|e| Error::Malformed {
            source_name: source.to_owned(),
            line,
            message: e.to_string(),
        })?;
        let rating = parse_rating(&row.rating, line, source)?;
        groups.entry(row.context).or_default().push(Response {
            participant: row.participant_id,
            cell: pair_cell(&row.item_a, &row.item_b),
            rating,
        });
    }
    groups
        .into_iter()
        .map(|(ctx, resp)| Ok((ctx.clone(), JudgmentSet::new(ctx, JudgmentKind::Pairs, resp)?)))
        .collect()
}

/// Reads `participant_id,context,feature,item,rating` into one set per
/// (context, feature).
pub fn read_feature_ratings<R: Read>(
    r: R,
    source: &str,
) -> Result<BTreeMap<(String, String), JudgmentSet>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut groups: BTreeMap<(String, String), Vec<Response>> = BTreeMap::new();
    for (i, row) in rdr.deserialize().enumerate() {
        let line = i + 2;
        let row: FeatureRow = row.map_err(|e| Error::Malformed {
            source_name: source.to_owned(),
            line,
            message: e.to_string(),
        })?;
        let rating = parse_rating(&row.rating, line, source)?;
        groups
            .entry((row.context, row.feature.clone()))
            .or_default()
            .push(Response {
                participant: row.participant_id,
                cell: (row.feature, row.item),
                rating,
            });
    }
    groups
        .into_iter()
        .map(|(key, resp)| {
            let set = JudgmentSet::new(key.0.clone(), JudgmentKind::Features, resp)?;
            Ok((key, set))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[(&str, &str, &str, u8)]) -> JudgmentSet {
        JudgmentSet::from_pair_ratings("c", rows.iter().map(|&(p, a, b, r)| (p, a, b, r))).unwrap()
    }

    fn grid(p: &str, ratings: [u8; 6]) -> Vec<(String, String, String, u8)> {
        let items = ["a", "b", "c", "d"];
        canonical_pairs(4)
            .into_iter()
            .zip(ratings)
            .map(|((i, j), r)| (p.to_owned(), items[i].to_owned(), items[j].to_owned(), r))
            .collect()
    }

    fn cohort(rows: Vec<Vec<(String, String, String, u8)>>) -> JudgmentSet {
        JudgmentSet::from_pair_ratings("c", rows.into_iter().flatten()).unwrap()
    }

    #[test]
    fn mean_of_two() {
        let j = set(&[("p1", "a", "b", 3), ("p2", "b", "a", 5)]);
        assert_eq!(mean_truth(&j)[&pair_cell("a", "b")], 4.0);
    }

    #[test]
    fn single_participant_verbatim() {
        let j = cohort(vec![grid("p", [1, 2, 3, 4, 5, 1])]);
        let s = mean_pair_scores(&j, &["a", "b", "c", "d"]).unwrap();
        assert_eq!(s.scores, vec![1.0, 2.0, 3.0, 4.0, 5.0, 1.0]);
        assert!(mean_pair_scores(&j, &["a", "b", "z"]).is_err());
    }

    #[test]
    fn constant_responder_removed() {
        let j = cohort(vec![
            grid("p1", [1, 2, 3, 4, 5, 1]),
            grid("p2", [1, 2, 3, 4, 5, 2]),
            grid("p3", [2, 2, 3, 4, 5, 1]),
            grid("flat", [1; 6]),
        ]);
        let f = filter_participants(&j, 0.5).unwrap();
        assert!(!f.retained().contains("flat"));
        assert_eq!(f.retained().len(), 3);
        assert_eq!(f.removed()[0].reason, RemovalReason::NoVariance);
    }

    #[test]
    fn identical_participants_all_kept() {
        let j = cohort((0..4).map(|i| grid(&format!("p{i}"), [1, 3, 2, 5, 4, 2])).collect());
        let f = filter_participants(&j, 0.5).unwrap();
        assert_eq!(f.retained().len(), 4);
        let rel = reliability_ceiling(&f, 0.7).unwrap();
        assert!((rel.ceiling - 1.0).abs() < 1e-12);
        assert!((rel.fraction - 0.7).abs() < 1e-12);
    }

    #[test]
    fn too_few_left() {
        let j = cohort(vec![grid("p1", [1, 2, 3, 4, 5, 1]), grid("flat", [2; 6])]);
        assert!(matches!(
            filter_participants(&j, 0.5),
            Err(Error::TooFewParticipants(1))
        ));
    }

    #[test]
    fn rating_range_enforced() {
        let err = read_judgments(
            "participant_id,context,item_a,item_b,rating\np,c,a,b,6\n".as_bytes(),
            "j.csv",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Malformed { line: 2, .. }));
        assert!(JudgmentSet::from_pair_ratings("c", [("p", "a", "b", 0u8)]).is_err());
    }

    #[test]
    fn duplicate_response_rejected() {
        assert!(JudgmentSet::from_pair_ratings("c", [("p", "a", "b", 1u8), ("p", "b", "a", 2)]).is_err());
    }

    #[test]
    fn csv_loading_groups_contexts() {
        let text = "participant_id,context,item_a,item_b,rating\n\
                    p1,nature,bear,cat,3\np1,transportation,car,boat,2\np2,nature,cat,bear,5\n";
        let sets = read_judgments(text.as_bytes(), "j.csv").unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(mean_truth(&sets["nature"])[&pair_cell("bear", "cat")], 4.0);

        let feats = "participant_id,context,feature,item,rating\n\
                     p1,nature,size,bear,5\np2,nature,size,bear,4\np1,nature,size,cat,1\n";
        let f = read_feature_ratings(feats.as_bytes(), "f.csv").unwrap();
        let s = &f[&("nature".to_string(), "size".to_string())];
        assert_eq!(mean_feature_ratings(s, "size", &["bear", "cat"]).unwrap(), vec![4.5, 1.0]);
    }
}
