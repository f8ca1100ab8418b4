//! Two synthetic contexts group the same ten words differently. A space
//! trained on each context recovers its own grouping best; a 50/50 mixture
//! lands in between.

use ctxsim::corpus::{mix_corpora, Corpus};
use ctxsim::embedding::{train_sgns, TrainConfig};
use ctxsim::eval::pearson;
use ctxsim::similarity::predict_cosine;
use ctxsim::synthetic::{BlockContext, BlockCorpusConfig};

fn score(corpus: &Corpus, items: &[String], truth: &[f64]) -> ctxsim::Result<f64> {
    let cfg = TrainConfig {
        dim: 25,
        window: 5,
        seed: 0,
        ..TrainConfig::default()
    };
    let space = train_sgns(corpus, &cfg)?;
    pearson(&predict_cosine(&space, "synthetic", items)?.scores, truth)
}

fn main() -> ctxsim::Result<()> {
    let items: Vec<String> = (0..10).map(|i| format!("obj{i}")).collect();
    let halves = BlockContext::new("halves", "h", (0..10).map(|i| usize::from(i >= 5)).collect());
    let parity = BlockContext::new("parity", "p", (0..10).map(|i| i % 2).collect());
    let cfg = BlockCorpusConfig {
        target_tokens: 60_000,
        ..BlockCorpusConfig::default()
    };
    let a = halves.corpus(&items, &cfg, 1)?;
    let b = parity.corpus(&items, &cfg, 2)?;
    let mixed = mix_corpora(&a, &b, 0.5, 3)?.corpus;

    for ctx in [&halves, &parity] {
        let truth = ctx.planted(&items)?.scores;
        println!(
            "{:>6} grouping: halves-trained r = {:.3}, mixed r = {:.3}, parity-trained r = {:.3}",
            ctx.name,
            score(&a, &items, &truth)?,
            score(&mixed, &items, &truth)?,
            score(&b, &items, &truth)?
        );
    }
    Ok(())
}
