use serde::{Deserialize, Serialize};

use super::train::TrainConfig;
use super::vocab::Vocabulary;
use crate::error::{Error, Result};

/// Provenance recorded for trained spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceMetadata {
    pub config: TrainConfig,
    pub corpus_tokens: u64,
}

/// A vocabulary and its `|V| × dim` word-vector matrix (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSpace {
    vocab: Vocabulary,
    dim: usize,
    vectors: Vec<f32>,
    context: Option<Vec<f32>>,
    metadata: Option<SpaceMetadata>,
}

impl EmbeddingSpace {
    pub fn new(vocab: Vocabulary, dim: usize, vectors: Vec<f32>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if vectors.len() != vocab.len() * dim {
            return Err(Error::Mismatch(format!(
                "{} values for {} words of dimension {dim}",
                vectors.len(),
                vocab.len()
            )));
        }
        if vectors.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("embedding vectors"));
        }
        Ok(EmbeddingSpace {
            vocab,
            dim,
            vectors,
            context: None,
            metadata: None,
        })
    }

    /// Builds a space from `(word, vector)` rows; counts are left at zero.
    pub fn from_rows<S: Into<String>, V: AsRef<[f32]>>(
        rows: impl IntoIterator<Item = (S, V)>,
    ) -> Result<Self> {
        let mut words = Vec::new();
        let mut vectors = Vec::new();
        let mut dim = None;
        for (i, (w, v)) in rows.into_iter().enumerate() {
            let v = v.as_ref();
            let d = *dim.get_or_insert(v.len());
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    row: i + 1,
                    expected: d,
                    found: v.len(),
                });
            }
            words.push(w.into());
            vectors.extend_from_slice(v);
        }
        let n = words.len();
        let vocab = Vocabulary::from_words(words, vec![0; n])?;
        EmbeddingSpace::new(vocab, dim.unwrap_or(1), vectors)
    }

    pub(crate) fn with_training_state(
        mut self,
        context: Vec<f32>,
        metadata: SpaceMetadata,
    ) -> Self {
        self.context = Some(context);
        self.metadata = Some(metadata);
        self
    }

    pub fn with_metadata(mut self, metadata: Option<SpaceMetadata>) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn metadata(&self) -> Option<&SpaceMetadata> {
        self.metadata.as_ref()
    }

    pub fn matrix(&self) -> &[f32] {
        &self.vectors
    }

    pub fn context_matrix(&self) -> Option<&[f32]> {
        self.context.as_deref()
    }

    /// Drops the context matrix once training is over.
    pub fn discard_context(&mut self) {
        self.context = None;
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn get(&self, word: &str) -> Option<&[f32]> {
        self.vocab.index_of(word).map(|i| self.row(i))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vocab.index_of(word).is_some()
    }

    /// Vector for `word`, or an out-of-vocabulary error naming it.
    pub fn vector(&self, word: &str) -> Result<&[f32]> {
        self.get(word)
            .ok_or_else(|| Error::OutOfVocabulary(word.to_owned()))
    }

    /// Vector for `word` widened to `f64`.
    pub fn vector_f64(&self, word: &str) -> Result<Vec<f64>> {
        Ok(self.vector(word)?.iter().map(|&x| x as f64).collect())
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cosine of the angle between two vectors; `None` if either is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    Some((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

/// Cosine similarity between the vectors of two vocabulary words.
pub fn cosine_similarity(space: &EmbeddingSpace, w1: &str, w2: &str) -> Result<f64> {
    let a = space.vector_f64(w1)?;
    let b = space.vector_f64(w2)?;
    if norm(&a) == 0.0 {
        return Err(Error::ZeroVector(w1.to_owned()));
    }
    if norm(&b) == 0.0 {
        return Err(Error::ZeroVector(w2.to_owned()));
    }
    Ok(cosine(&a, &b).expect("nonzero norms checked"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> EmbeddingSpace {
        EmbeddingSpace::from_rows([
            ("a", vec![1.0f32, 0.0]),
            ("b", vec![1.0, 1.0]),
            ("c", vec![0.0, 3.0]),
            ("z", vec![0.0, 0.0]),
        ])
        .unwrap()
    }

    #[test]
    fn identical_is_one() {
        assert!((cosine_similarity(&space(), "b", "b").unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_is_zero() {
        assert_eq!(cosine_similarity(&space(), "a", "c").unwrap(), 0.0);
    }

    #[test]
    fn forty_five_degrees() {
        let got = cosine_similarity(&space(), "a", "b").unwrap();
        assert!((got - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12, "{got}");
    }

    #[test]
    fn errors_name_the_word() {
        let s = space();
        assert!(matches!(
            cosine_similarity(&s, "a", "nope"),
            Err(Error::OutOfVocabulary(w)) if w == "nope"
        ));
        assert!(matches!(
            cosine_similarity(&s, "z", "a"),
            Err(Error::ZeroVector(w)) if w == "z"
        ));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = EmbeddingSpace::from_rows([("a", vec![1.0f32, 0.0]), ("b", vec![1.0])]);
        assert!(matches!(err, Err(Error::DimensionMismatch { row: 2, .. })));
    }

    #[test]
    fn non_finite_rejected() {
        let err = EmbeddingSpace::from_rows([("a", vec![f32::NAN])]);
        assert!(matches!(err, Err(Error::NonFinite(_))));
    }
}
