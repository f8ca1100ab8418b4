use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::pairs::{canonical_pairs, PairScores};
use super::regression::fit_least_squares;
use crate::embedding::{cosine, cosine_similarity, EmbeddingSpace};
use crate::error::{Error, Result};
use crate::projection::RatingsMatrix;

pub const METHOD_COSINE: &str = "cosine";
pub const METHOD_SUBSPACE_COSINE: &str = "subspace-cosine";
pub const METHOD_PROJ_REGRESSION: &str = "proj-regression";
pub const METHOD_RAWDIM_REGRESSION: &str = "rawdim-regression";

/// How two items' feature ratings become one regression row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairEncoding {
    /// `|r_a − r_b|` per feature.
    #[default]
    Absolute,
    /// `(r_a − r_b)²` per feature.
    Squared,
}

impl PairEncoding {
    fn encode(self, a: f64, b: f64) -> f64 {
        match self {
            PairEncoding::Absolute => (a - b).abs(),
            PairEncoding::Squared => (a - b) * (a - b),
        }
    }
}

/// Cosine similarity of each canonical item pair.
pub fn predict_cosine<S: AsRef<str>>(
    space: &EmbeddingSpace,
    context: &str,
    items: &[S],
) -> Result<PairScores> {
    let scores = canonical_pairs(items.len())
        .into_iter()
        .map(|(i, j)| cosine_similarity(space, items[i].as_ref(), items[j].as_ref()))
        .collect::<Result<Vec<f64>>>()?;
    PairScores::from_items(context, METHOD_COSINE, items, scores)
}

fn rating_rows<'a, S: AsRef<str>>(
    ratings: &'a RatingsMatrix,
    items: &[S],
) -> Result<Vec<&'a [f64]>> {
    items
        .iter()
        .map(|w| {
            ratings
                .row(w.as_ref())
                .ok_or_else(|| Error::OutOfVocabulary(w.as_ref().to_owned()))
        })
        .collect()
}

/// Pairs × features design matrix in canonical pair order.
pub fn featurize_pairs<S: AsRef<str>>(
    ratings: &RatingsMatrix,
    items: &[S],
    encoding: PairEncoding,
) -> Result<DMatrix<f64>> {
    let rows = rating_rows(ratings, items)?;
    Ok(encode_pairs(&rows, ratings.features.len(), encoding))
}

fn encode_pairs(rows: &[&[f64]], width: usize, encoding: PairEncoding) -> DMatrix<f64> {
    let pairs = canonical_pairs(rows.len());
    DMatrix::from_fn(pairs.len(), width, |p, k| {
        let (i, j) = pairs[p];
        encoding.encode(rows[i][k], rows[j][k])
    })
}

/// Train/test split of one leave-one-object-out fold, as indices into the
/// canonical pair list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoocvFold {
    pub left_out: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// One fold per item: train on pairs not touching it, test on pairs that do.
pub fn loocv_folds(n_items: usize) -> Vec<LoocvFold> {
    let pairs = canonical_pairs(n_items);
    (0..n_items)
        .map(|o| {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..pairs.len()).partition(|&p| pairs[p].0 == o || pairs[p].1 == o);
            LoocvFold {
                left_out: o,
                train,
                test,
            }
        })
        .collect()
}

/// Out-of-sample predictions under leave-one-object-out CV.
///
/// Every pair is predicted by the two folds that hold out one of its
/// endpoints; the two predictions are averaged.
pub fn loocv_predict(design: &DMatrix<f64>, truth: &[f64], n_items: usize) -> Result<Vec<f64>> {
    if n_items < 3 {
        return Err(Error::InvalidArgument(format!(
            "leave-one-object-out needs at least 3 items, got {n_items}"
        )));
    }
    let n_pairs = canonical_pairs(n_items).len();
    if design.nrows() != n_pairs || truth.len() != n_pairs {
        return Err(Error::Mismatch(format!(
            "expected {n_pairs} pair rows, got design {} and truth {}",
            design.nrows(),
            truth.len()
        )));
    }
    let mut sum = vec![0.0; n_pairs];
    let mut hits = vec![0u32; n_pairs];
    for fold in loocv_folds(n_items) {
        let x = design.select_rows(fold.train.iter());
        let y: Vec<f64> = fold.train.iter().map(|&p| truth[p]).collect();
        let model = fit_least_squares(&x, &y)?;
        for &p in &fold.test {
            let row: Vec<f64> = design.row(p).iter().copied().collect();
            sum[p] += model.predict(&row);
            hits[p] += 1;
        }
    }
    Ok(sum
        .iter()
        .zip(&hits)
        .map(|(s, &h)| s / h as f64)
        .collect())
}

/// Regression on projected feature ratings, evaluated out of sample.
pub fn loocv_projection_regression(
    ratings: &RatingsMatrix,
    truth: &PairScores,
    encoding: PairEncoding,
) -> Result<PairScores> {
    let items = &ratings.items;
    if items.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "leave-one-object-out needs at least 3 items, got {}",
            items.len()
        )));
    }
    let design = featurize_pairs(ratings, items, encoding)?;
    regress(items, &design, truth, METHOD_PROJ_REGRESSION)
}

/// Regression on per-dimension absolute differences of raw vectors.
pub fn loocv_rawdim_regression<S: AsRef<str>>(
    space: &EmbeddingSpace,
    items: &[S],
    truth: &PairScores,
) -> Result<PairScores> {
    if items.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "leave-one-object-out needs at least 3 items, got {}",
            items.len()
        )));
    }
    let vecs = items
        .iter()
        .map(|w| space.vector_f64(w.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<&[f64]> = vecs.iter().map(Vec::as_slice).collect();
    let design = encode_pairs(&rows, space.dim(), PairEncoding::Absolute);
    let items: Vec<String> = items.iter().map(|s| s.as_ref().to_owned()).collect();
    regress(&items, &design, truth, METHOD_RAWDIM_REGRESSION)
}

fn regress(
    items: &[String],
    design: &DMatrix<f64>,
    truth: &PairScores,
    method: &str,
) -> Result<PairScores> {
    let shape = PairScores::from_items(&truth.context, method, items, vec![0.0; design.nrows()])?;
    let y = truth.aligned_to(&shape)?;
    let pred = loocv_predict(design, &y, items.len())?;
    PairScores::from_items(&truth.context, method, items, pred)
}

/// Cosine between the items' rating rows, i.e. every feature weighted
/// equally.
pub fn predict_subspace_cosine<S: AsRef<str>>(
    ratings: &RatingsMatrix,
    context: &str,
    items: &[S],
) -> Result<PairScores> {
    let rows = rating_rows(ratings, items)?;
    let scores = canonical_pairs(items.len())
        .into_iter()
        .map(|(i, j)| {
            cosine(rows[i], rows[j]).ok_or_else(|| {
                let zero = if rows[i].iter().all(|v| *v == 0.0) { i } else { j };
                Error::ZeroVector(items[zero].as_ref().to_owned())
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    PairScores::from_items(context, METHOD_SUBSPACE_COSINE, items, scores)
}
