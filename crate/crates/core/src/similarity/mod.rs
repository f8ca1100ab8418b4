//! Pairwise similarity predictions.
//!
//! Four predictors are available: raw cosine, cosine within the projected
//! feature subspace, and two leave-one-object-out regressions (on projected
//! feature ratings and on raw embedding dimensions).

mod pairs;
mod predict;
mod regression;

pub use pairs::{canonical_pairs, read_pair_scores, write_pair_scores, PairScores};
pub use predict::{
    featurize_pairs, loocv_folds, loocv_predict, loocv_projection_regression,
    loocv_rawdim_regression, predict_cosine, predict_subspace_cosine, LoocvFold, PairEncoding,
    METHOD_COSINE, METHOD_PROJ_REGRESSION, METHOD_RAWDIM_REGRESSION, METHOD_SUBSPACE_COSINE,
};
pub use regression::{fit_least_squares, RegressionModel};
