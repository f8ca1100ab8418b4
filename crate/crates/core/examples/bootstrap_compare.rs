//! Bootstraps correlations for two models over the same pairs and tests
//! whether one beats the other.

use ctxsim::eval::{compare_models, evaluate, BootstrapOptions};
use ctxsim::similarity::PairScores;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ctxsim::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let items: Vec<String> = (0..10).map(|i| format!("item{i}")).collect();
    let truth: Vec<f64> = (0..45).map(|_| rng.random_range(1.0..5.0)).collect();
    let noisy = |rng: &mut ChaCha8Rng, sd: f64| -> Vec<f64> {
        truth.iter().map(|t| t + rng.random_range(-sd..sd)).collect()
    };
    let sharp = PairScores::from_items("demo", "sharp", &items, noisy(&mut rng, 1.0))?;
    let blurry = PairScores::from_items("demo", "blurry", &items, noisy(&mut rng, 4.0))?;
    let truth = PairScores::from_items("demo", "human", &items, truth)?;

    let opts = BootstrapOptions::with_seed(1);
    for r in evaluate(&[&sharp, &blurry], &truth, &opts)? {
        println!(
            "{:>6}: r = {:.3}, bootstrap mean {:.3}, 95% CI [{:.3}, {:.3}], p vs others {:?}",
            r.method, r.r_full, r.r_mean, r.ci95[0], r.ci95[1], r.p_values
        );
    }
    println!("p(sharp > blurry) = {:.3}", compare_models(&sharp, &blurry, &truth, &opts)?);
    println!("p(blurry > sharp) = {:.3}", compare_models(&blurry, &sharp, &truth, &opts)?);
    Ok(())
}
