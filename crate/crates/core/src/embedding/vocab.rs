use std::collections::HashMap;

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Words retained for training, ordered by descending count (ties by word).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, usize>,
    counts: Vec<u64>,
    total_tokens: u64,
}

impl Vocabulary {
    /// Builds a vocabulary from words in their final order. Counts may be
    /// zero when they are unknown (vectors loaded from disk).
    pub fn from_words(words: Vec<String>, counts: Vec<u64>) -> Result<Self> {
        if words.len() != counts.len() {
            return Err(Error::Mismatch(format!(
                "{} words but {} counts",
                words.len(),
                counts.len()
            )));
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::Mismatch(format!("duplicate word `{w}`")));
            }
        }
        let total_tokens = counts.iter().sum();
        Ok(Vocabulary {
            words,
            index,
            counts,
            total_tokens,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &str {
        &self.words[i]
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, word: &str) -> u64 {
        self.index_of(word).map_or(0, |i| self.counts[i])
    }

    /// Sum of counts over retained words.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }
}

/// Keeps words occurring at least `min_count` times.
pub fn build_vocabulary(corpus: &Corpus, min_count: u64) -> Result<Vocabulary> {
    if min_count == 0 {
        return Err(Error::InvalidArgument("min_count must be at least 1".into()));
    }
    let mut kept: Vec<(&String, u64)> = corpus
        .word_counts()
        .iter()
        .filter(|(_, &c)| c >= min_count)
        .map(|(w, &c)| (w, c))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary { min_count });
    }
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let (words, counts) = kept.into_iter().map(|(w, c)| (w.clone(), c)).unzip();
    Vocabulary::from_words(words, counts)
}
