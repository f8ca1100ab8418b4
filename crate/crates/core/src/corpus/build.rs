use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::store::ArticleStore;
use super::tokenize::normalize_line;
use crate::error::{Error, Result, Shortfall};

/// One article after normalization: its tokens joined by single spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusArticle {
    id: String,
    text: String,
    len: u64,
}

impl CorpusArticle {
    /// `text` must already be normalized (lowercase alphanumeric tokens
    /// separated by single spaces).
    pub(crate) fn from_normalized(id: String, text: String) -> Self {
        let len = if text.is_empty() {
            0
        } else {
            text.split(' ').count() as u64
        };
        CorpusArticle { id, text, len }
    }

    pub fn new(id: impl Into<String>, raw_text: &str) -> Self {
        let (text, len) = normalize_line(raw_text);
        CorpusArticle {
            id: id.into(),
            text,
            len,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.text.split(' ').filter(|t| !t.is_empty())
    }
}

/// Ordered token stream grouped by source article.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    articles: Vec<CorpusArticle>,
    word_counts: BTreeMap<String, u64>,
    token_count: u64,
}

impl Corpus {
    pub fn from_articles(articles: Vec<CorpusArticle>) -> Self {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for a in &articles {
            for t in a.tokens() {
                *counts.entry(t).or_default() += 1;
            }
        }
        let word_counts: BTreeMap<String, u64> =
            counts.into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
        let token_count = articles.iter().map(|a| a.len).sum();
        Corpus {
            articles,
            word_counts,
            token_count,
        }
    }

    /// Convenience constructor: one raw text per article, ids `0`, `1`, ...
    pub fn from_texts<S: AsRef<str>>(texts: impl IntoIterator<Item = S>) -> Self {
        let articles = texts
            .into_iter()
            .enumerate()
            .map(|(i, t)| CorpusArticle::new(format!("{i}"), t.as_ref()))
            .collect();
        Corpus::from_articles(articles)
    }

    pub fn articles(&self) -> &[CorpusArticle] {
        &self.articles
    }

    pub fn token_count(&self) -> u64 {
        self.token_count
    }

    pub fn word_counts(&self) -> &BTreeMap<String, u64> {
        &self.word_counts
    }

    pub fn count(&self, word: &str) -> u64 {
        self.word_counts.get(word).copied().unwrap_or(0)
    }

    pub fn source_ids(&self) -> impl Iterator<Item = &str> {
        self.articles.iter().map(|a| a.id.as_str())
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.articles.iter().flat_map(|a| a.tokens())
    }

    pub fn is_empty(&self) -> bool {
        self.token_count == 0
    }
}

/// Tokenizes the selected articles in id order, stopping before the first
/// article that would push the total past `cap`.
pub fn build_corpus(
    store: &ArticleStore,
    ids: &BTreeSet<String>,
    cap: Option<u64>,
) -> Result<Corpus> {
    if ids.is_empty() {
        return Err(Error::EmptySelection);
    }
    let records = ids
        .iter()
        .map(|id| {
            store
                .get(id)
                .ok_or_else(|| Error::UnknownArticle(id.clone()))
        })
        .collect::<Result<Vec<_>>>()?;

    let normalized: Vec<CorpusArticle> = records
        .par_iter()
        .map(|r| CorpusArticle::new(r.id.clone(), &r.text))
        .collect();

    let mut kept = Vec::with_capacity(normalized.len());
    let mut total = 0u64;
    for a in normalized {
        if a.is_empty() {
            continue;
        }
        if let Some(cap) = cap {
            if total + a.len > cap {
                break;
            }
        }
        total += a.len;
        kept.push(a);
    }
    Ok(Corpus::from_articles(kept))
}

/// How much of one source corpus went into a mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceShare {
    pub fraction: f64,
    pub source_tokens: u64,
    pub tokens: u64,
    pub articles: usize,
}

#[derive(Debug, Clone)]
pub struct MixedCorpus {
    pub corpus: Corpus,
    pub shares: [SourceShare; 2],
}

fn leading_share(c: &Corpus, fraction: f64) -> (Vec<CorpusArticle>, SourceShare) {
    let budget = (fraction * c.token_count as f64).floor() as u64;
    let mut taken = Vec::new();
    let mut tokens = 0u64;
    for a in &c.articles {
        if tokens + a.len > budget {
            break;
        }
        tokens += a.len;
        taken.push(a.clone());
    }
    let share = SourceShare {
        fraction,
        source_tokens: c.token_count,
        tokens,
        articles: taken.len(),
    };
    (taken, share)
}

/// Takes the leading `fraction` of `a` and `1 - fraction` of `b` (whole
/// articles) and interleaves them in a seeded shuffle.
pub fn mix_corpora(a: &Corpus, b: &Corpus, fraction: f64, seed: u64) -> Result<MixedCorpus> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidArgument(format!(
            "mix fraction {fraction} outside [0, 1]"
        )));
    }
    let (mut from_a, share_a) = leading_share(a, fraction);
    let (from_b, share_b) = leading_share(b, 1.0 - fraction);
    from_a.extend(from_b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    from_a.shuffle(&mut rng);
    Ok(MixedCorpus {
        corpus: Corpus::from_articles(from_a),
        shares: [share_a, share_b],
    })
}

/// Exact token counts for `words`.
pub fn count_occurrences<S: AsRef<str>>(c: &Corpus, words: &[S]) -> BTreeMap<String, u64> {
    words
        .iter()
        .map(|w| (w.as_ref().to_owned(), c.count(w.as_ref())))
        .collect()
}

/// Subsamples `source` so every target word occurs exactly as often as in
/// `reference`, then pads with every source article that mentions no target.
///
/// Articles carrying targets are visited in descending order of total target
/// occurrences (seeded shuffle breaks ties); an article is taken only if it
/// overshoots no target.
pub fn frequency_match<S: AsRef<str>>(
    source: &Corpus,
    reference: &Corpus,
    targets: &[S],
    seed: u64,
) -> Result<Corpus> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument(
            "frequency match needs at least one target".into(),
        ));
    }
    let targets: Vec<&str> = {
        let mut seen = BTreeSet::new();
        targets
            .iter()
            .map(AsRef::as_ref)
            .filter(|t| seen.insert(*t))
            .collect()
    };
    let slot: HashMap<&str, usize> = targets.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let wanted: Vec<u64> = targets.iter().map(|t| reference.count(t)).collect();

    let mut order: Vec<usize> = (0..source.articles.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let per_article: Vec<Vec<u64>> = source
        .articles
        .iter()
        .map(|a| {
            let mut v = vec![0u64; targets.len()];
            for t in a.tokens() {
                if let Some(&i) = slot.get(t) {
                    v[i] += 1;
                }
            }
            v
        })
        .collect();

    let mut carriers: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| per_article[i].iter().any(|&c| c > 0))
        .collect();
    // stable: shuffled order survives among equal totals
    carriers.sort_by_key(|&i| std::cmp::Reverse(per_article[i].iter().sum::<u64>()));

    let mut reached = vec![0u64; targets.len()];
    let mut chosen = vec![false; source.articles.len()];
    for &i in &carriers {
        let fits = per_article[i]
            .iter()
            .zip(reached.iter().zip(&wanted))
            .all(|(&c, (&r, &w))| r + c <= w);
        if fits {
            for (r, &c) in reached.iter_mut().zip(&per_article[i]) {
                *r += c;
            }
            chosen[i] = true;
        }
    }

    let shortfall: Vec<Shortfall> = targets
        .iter()
        .zip(reached.iter().zip(&wanted))
        .filter(|(_, (r, w))| r != w)
        .map(|(t, (&r, &w))| Shortfall {
            word: (*t).to_owned(),
            wanted: w,
            reached: r,
        })
        .collect();
    if !shortfall.is_empty() {
        return Err(Error::Unreachable(shortfall));
    }

    let articles = order
        .iter()
        .copied()
        .filter(|&i| chosen[i] || per_article[i].iter().all(|&c| c == 0))
        .map(|i| source.articles[i].clone())
        .collect();
    Ok(Corpus::from_articles(articles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::store::ArticleRecord;

    fn store_of(texts: &[(&str, &str)]) -> ArticleStore {
        let mut s = ArticleStore::new();
        for (id, text) in texts {
            s.insert(ArticleRecord {
                id: (*id).into(),
                title: String::new(),
                text: (*text).into(),
                categories: BTreeSet::new(),
            })
            .unwrap();
        }
        s
    }

    fn all_ids(s: &ArticleStore) -> BTreeSet<String> {
        s.ids().map(str::to_owned).collect()
    }

    #[test]
    fn concatenates_in_id_order() {
        let s = store_of(&[("b", "one two three four five"), ("a", "six seven eight nine ten")]);
        let c = build_corpus(&s, &all_ids(&s), None).unwrap();
        assert_eq!(c.token_count(), 10);
        assert_eq!(c.source_ids().collect::<Vec<_>>(), vec!["a", "b"]);
        assert_eq!(c.word_counts().values().sum::<u64>(), c.token_count());
    }

    #[test]
    fn cap_truncates_at_article_boundary() {
        let s = store_of(&[("a", "a b c d e"), ("b", "f g h i j")]);
        let c = build_corpus(&s, &all_ids(&s), Some(7)).unwrap();
        assert_eq!(c.token_count(), 5);
    }

    #[test]
    fn empty_selection() {
        let s = store_of(&[("a", "x")]);
        assert!(matches!(
            build_corpus(&s, &BTreeSet::new(), None),
            Err(Error::EmptySelection)
        ));
    }

    #[test]
    fn unknown_id() {
        let s = store_of(&[("a", "x")]);
        let ids: BTreeSet<String> = ["zzz".to_string()].into();
        assert!(matches!(
            build_corpus(&s, &ids, None),
            Err(Error::UnknownArticle(_))
        ));
    }

    fn units(prefix: &str, n: usize) -> Corpus {
        // n one-token articles
        Corpus::from_articles(
            (0..n)
                .map(|i| CorpusArticle::new(format!("{prefix}{i:03}"), prefix))
                .collect(),
        )
    }

    #[test]
    fn mix_half_and_half() {
        let a = units("a", 70);
        let b = units("b", 50);
        let m = mix_corpora(&a, &b, 0.5, 1).unwrap();
        assert_eq!(m.corpus.count("a"), 35);
        assert_eq!(m.corpus.count("b"), 25);
        assert_eq!(m.shares[0].tokens, 35);
        assert_eq!(m.shares[1].tokens, 25);
    }

    #[test]
    fn mix_extremes() {
        let a = units("a", 7);
        let b = units("b", 5);
        let only_a = mix_corpora(&a, &b, 1.0, 3).unwrap().corpus;
        assert_eq!(only_a.token_count(), 7);
        assert_eq!(only_a.count("b"), 0);
        let only_b = mix_corpora(&a, &b, 0.0, 3).unwrap().corpus;
        assert_eq!(only_b.token_count(), 5);
        assert_eq!(only_b.count("a"), 0);
    }

    #[test]
    fn mix_rejects_bad_fraction() {
        let a = units("a", 2);
        assert!(mix_corpora(&a, &a, 1.5, 0).is_err());
        assert!(mix_corpora(&a, &a, -0.1, 0).is_err());
    }

    #[test]
    fn mix_is_seeded() {
        let a = units("a", 20);
        let b = units("b", 20);
        let x = mix_corpora(&a, &b, 0.5, 9).unwrap().corpus;
        let y = mix_corpora(&a, &b, 0.5, 9).unwrap().corpus;
        assert_eq!(x, y);
    }

    #[test]
    fn counts_exact_tokens() {
        let c = Corpus::from_texts(["bear cat bear"]);
        let got = count_occurrences(&c, &["bear", "wolf"]);
        assert_eq!(got["bear"], 2);
        assert_eq!(got["wolf"], 0);
    }

    #[test]
    fn frequency_match_prefers_large_carriers() {
        let source = Corpus::from_texts([
            "w w w x",
            "w w y",
            "w w z",
            "plain filler text",
            "more filler",
        ]);
        let reference = Corpus::from_texts(["w w w w w"]);
        let out = frequency_match(&source, &reference, &["w"], 0).unwrap();
        assert_eq!(out.count("w"), 5);
        // [3, 2] plus both filler articles
        assert_eq!(out.articles().len(), 4);
        assert_eq!(out.count("filler"), 2);
    }

    #[test]
    fn frequency_match_zero_reference() {
        let source = Corpus::from_texts(["w a", "b c", "d w"]);
        let reference = Corpus::from_texts(["nothing here"]);
        let out = frequency_match(&source, &reference, &["w"], 4).unwrap();
        assert_eq!(out.count("w"), 0);
        assert_eq!(out.token_count(), 2);
    }

    #[test]
    fn frequency_match_reports_shortfall() {
        let source = Corpus::from_texts(["w", "v v"]);
        let reference = Corpus::from_texts(["w w w v v"]);
        match frequency_match(&source, &reference, &["w", "v"], 0) {
            Err(Error::Unreachable(s)) => {
                assert_eq!(
                    s,
                    vec![Shortfall {
                        word: "w".into(),
                        wanted: 3,
                        reached: 1
                    }]
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn frequency_match_needs_targets() {
        let c = Corpus::from_texts(["a"]);
        let none: [&str; 0] = [];
        assert!(frequency_match(&c, &c, &none, 0).is_err());
    }
}
