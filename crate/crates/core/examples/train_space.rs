//! Trains a space on a corpus where words come in topical groups and lists
//! each probe's nearest neighbours.

use ctxsim::embedding::{cosine, train_sgns_with_stats, TrainConfig};
use ctxsim::synthetic::{BlockContext, BlockCorpusConfig};

fn main() -> ctxsim::Result<()> {
    let items = ["fox", "wolf", "owl", "hawk", "bus", "tram", "ferry", "barge"];
    let ctx = BlockContext::new("demo", "pool", vec![0, 0, 1, 1, 2, 2, 3, 3]);
    let corpus = ctx.corpus(
        &items,
        &BlockCorpusConfig {
            target_tokens: 60_000,
            words_per_group: 10,
            ..BlockCorpusConfig::default()
        },
        4,
    )?;

    let cfg = TrainConfig {
        dim: 30,
        window: 5,
        seed: 1,
        ..TrainConfig::default()
    };
    let (space, stats) = train_sgns_with_stats(&corpus, &cfg, true)?;
    println!("{} tokens, {} words, dim {}", corpus.token_count(), space.len(), space.dim());
    for (e, l) in stats.epoch_losses.iter().enumerate() {
        println!("epoch {e}: mean loss {l:.4}");
    }

    for probe in ["fox", "hawk", "ferry"] {
        let v = space.vector_f64(probe)?;
        let mut scored: Vec<(f64, &str)> = space
            .vocab()
            .words()
            .iter()
            .filter(|w| w.as_str() != probe)
            .filter_map(|w| Some((cosine(&v, &space.vector_f64(w).ok()?)?, w.as_str())))
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        let top: Vec<String> = scored.iter().take(4).map(|(s, w)| format!("{w} {s:.2}")).collect();
        println!("{probe}: {}", top.join(", "));
    }
    Ok(())
}
