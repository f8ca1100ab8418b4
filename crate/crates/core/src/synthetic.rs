//! Synthetic corpora and rater cohorts with planted structure.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{Corpus, CorpusArticle};
use crate::error::{Error, Result};
use crate::eval::{pair_cell, JudgmentKind, JudgmentSet, Response};
use crate::similarity::{canonical_pairs, PairScores};

/// A context whose test items fall into groups, each group with a private
/// pool of context words.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockContext {
    pub name: String,
    /// Group of each item, indexed like the item list.
    pub groups: Vec<usize>,
    /// Prefix of this context's generated context words.
    pub prefix: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockCorpusConfig {
    pub words_per_group: usize,
    pub article_len: usize,
    pub target_tokens: usize,
    /// Share of tokens that are test items.
    pub item_rate: f64,
}

impl Default for BlockCorpusConfig {
    fn default() -> Self {
        BlockCorpusConfig {
            words_per_group: 40,
            article_len: 200,
            target_tokens: 200_000,
            item_rate: 0.2,
        }
    }
}

impl BlockContext {
    pub fn new(name: impl Into<String>, prefix: impl Into<String>, groups: Vec<usize>) -> Self {
        BlockContext {
            name: name.into(),
            groups,
            prefix: prefix.into(),
        }
    }

    fn n_groups(&self) -> usize {
        self.groups.iter().max().map_or(0, |g| g + 1)
    }

    /// Articles each drawn from one group: item tokens of that group mixed
    /// with that group's context words.
    pub fn corpus<S: AsRef<str>>(&self, items: &[S], cfg: &BlockCorpusConfig, seed: u64) -> Result<Corpus> {
        if items.len() != self.groups.len() {
            return Err(Error::Mismatch(format!(
                "{} items but {} group labels",
                items.len(),
                self.groups.len()
            )));
        }
        if cfg.article_len == 0 || cfg.words_per_group == 0 {
            return Err(Error::InvalidArgument("empty articles or word pools".into()));
        }
        let n_groups = self.n_groups();
        let members: Vec<Vec<&str>> = (0..n_groups)
            .map(|g| {
                items
                    .iter()
                    .zip(&self.groups)
                    .filter(|(_, &k)| k == g)
                    .map(|(i, _)| i.as_ref())
                    .collect()
            })
            .collect();
        let pools: Vec<Vec<String>> = (0..n_groups)
            .map(|g| {
                (0..cfg.words_per_group)
                    .map(|k| format!("{}g{g}w{k}", self.prefix))
                    .collect()
            })
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_articles = cfg.target_tokens.div_ceil(cfg.article_len);
        let mut articles = Vec::with_capacity(n_articles);
        for a in 0..n_articles {
            let g = rng.random_range(0..n_groups);
            let mut text = String::with_capacity(cfg.article_len * 8);
            for t in 0..cfg.article_len {
                if t > 0 {
                    text.push(' ');
                }
                let word: &str = if !members[g].is_empty() && rng.random_bool(cfg.item_rate) {
                    members[g].choose(&mut rng).expect("non-empty group")
                } else {
                    pools[g].choose(&mut rng).expect("non-empty pool")
                };
                text.push_str(word);
            }
            articles.push(CorpusArticle::new(format!("{}{a:06}", self.name), &text));
        }
        Ok(Corpus::from_articles(articles))
    }

    /// 1 for pairs in the same group, 0 otherwise.
    pub fn planted<S: AsRef<str>>(&self, items: &[S]) -> Result<PairScores> {
        let scores = canonical_pairs(items.len())
            .into_iter()
            .map(|(i, j)| if self.groups[i] == self.groups[j] { 1.0 } else { 0.0 })
            .collect();
        PairScores::from_items(&self.name, "planted", items, scores)
    }
}

fn clamp_likert(x: f64) -> u8 {
    x.round().clamp(1.0, 5.0) as u8
}

/// A simulated cohort over the canonical pairs of `items`.
#[derive(Debug, Clone)]
pub struct Cohort {
    context: String,
    items: Vec<String>,
    responses: Vec<Response>,
}

impl Cohort {
    pub fn new<S: AsRef<str>>(context: &str, items: &[S]) -> Self {
        Cohort {
            context: context.to_owned(),
            items: items.iter().map(|s| s.as_ref().to_owned()).collect(),
            responses: Vec::new(),
        }
    }

    fn push(&mut self, participant: &str, mut rating: impl FnMut(usize) -> u8) {
        for (p, (i, j)) in canonical_pairs(self.items.len()).into_iter().enumerate() {
            self.responses.push(Response {
                participant: participant.to_owned(),
                cell: pair_cell(&self.items[i], &self.items[j]),
                rating: rating(p),
            });
        }
    }

    /// Rater answering `round(truth + N(0, sigma))`, clamped to 1..=5.
    pub fn noisy(mut self, participant: &str, truth: &[f64], sigma: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, sigma).expect("finite sigma");
        self.push(participant, |p| clamp_likert(truth[p] + noise.sample(&mut rng)));
        self
    }

    /// Rater answering uniformly at random.
    pub fn uniform(mut self, participant: &str, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.push(participant, |_| rng.random_range(1..=5));
        self
    }

    /// Rater giving the same answer to every pair.
    pub fn constant(mut self, participant: &str, rating: u8) -> Self {
        self.push(participant, |_| rating);
        self
    }

    pub fn build(self) -> Result<JudgmentSet> {
        JudgmentSet::new(self.context, JudgmentKind::Pairs, self.responses)
    }
}
