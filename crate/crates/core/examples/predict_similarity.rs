//! Predicts pairwise similarity three ways and scores each against planted
//! human-like judgments.

use ctxsim::eval::pearson;
use ctxsim::projection::RatingsMatrix;
use ctxsim::similarity::{
    canonical_pairs, loocv_projection_regression, predict_subspace_cosine, PairEncoding, PairScores,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ctxsim::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let items: Vec<String> = (0..10).map(|i| format!("item{i}")).collect();
    let features: Vec<String> = (0..6).map(|k| format!("f{k}")).collect();
    let values: Vec<Vec<f64>> = (0..10)
        .map(|_| (0..6).map(|_| rng.random_range(-0.6..0.4)).collect())
        .collect();
    let ratings = RatingsMatrix::new(items.clone(), features, values.clone())?;

    // People weight the first two features heavily.
    let weights = [3.0, 2.0, 0.2, 0.2, 0.1, 0.1];
    let truth: Vec<f64> = canonical_pairs(10)
        .into_iter()
        .map(|(a, b)| {
            let d: f64 = (0..6).map(|k| weights[k] * (values[a][k] - values[b][k]).abs()).sum();
            5.0 - d + rng.random_range(-0.1..0.1)
        })
        .collect();
    let truth = PairScores::from_items("demo", "human", &items, truth)?;

    let equal = predict_subspace_cosine(&ratings, "demo", &items)?;
    let abs = loocv_projection_regression(&ratings, &truth, PairEncoding::Absolute)?;
    let sq = loocv_projection_regression(&ratings, &truth, PairEncoding::Squared)?;
    for (name, p) in [("equal weights", &equal), ("regression |d|", &abs), ("regression d^2", &sq)] {
        println!("{name:>15}: r = {:.3}", pearson(&p.scores, &truth.scores)?);
    }
    Ok(())
}
