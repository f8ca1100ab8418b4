use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sampler::NegativeSampler;
use super::sgns::sgd_step;
use super::space::{EmbeddingSpace, SpaceMetadata};
use super::vocab::{build_vocabulary, Vocabulary};
use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Skip-gram negative-sampling hyperparameters.
///
/// The defaults are the original word2vec settings with a window of 9 and
/// 100 dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    /// Context radius on each side of the center word.
    pub window: usize,
    pub dim: usize,
    pub learning_rate: f64,
    pub min_count: u64,
    /// Frequent-word downsampling threshold.
    pub subsample_t: f64,
    pub negatives: usize,
    pub neg_exponent: f64,
    /// Full passes over the corpus.
    pub iterations: usize,
    pub seed: u64,
    /// Shrink the window uniformly in `1..=window` per center word.
    pub dynamic_window: bool,
    /// Worker threads. Only `1` is deterministic.
    pub threads: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            window: 9,
            dim: 100,
            learning_rate: 0.025,
            min_count: 5,
            subsample_t: 1e-3,
            negatives: 5,
            neg_exponent: 0.75,
            iterations: 5,
            seed: 0,
            dynamic_window: false,
            threads: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_owned()));
        if self.window < 1 {
            return bad("window must be at least 1");
        }
        if self.dim < 1 {
            return bad("dim must be at least 1");
        }
        if self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return bad("learning_rate must be positive");
        }
        if self.negatives < 1 {
            return bad("negatives must be at least 1");
        }
        if self.min_count < 1 {
            return bad("min_count must be at least 1");
        }
        if self.iterations < 1 {
            return bad("iterations must be at least 1");
        }
        if self.threads < 1 {
            return bad("threads must be at least 1");
        }
        Ok(())
    }
}

/// Per-epoch training diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainStats {
    /// Mean per-pair loss of each epoch (empty unless loss tracking is on).
    pub epoch_losses: Vec<f64>,
    /// Pairs trained per epoch.
    pub epoch_pairs: Vec<u64>,
}

/// Probability of keeping a token with relative frequency `f` under
/// threshold `t`: `min(1, sqrt(t / f))`.
pub fn keep_probability(t: f64, f: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    (t / f).sqrt().clamp(0.0, 1.0)
}

/// Trains an embedding space on `corpus`.
pub fn train_sgns(corpus: &Corpus, cfg: &TrainConfig) -> Result<EmbeddingSpace> {
    train_sgns_with_stats(corpus, cfg, false).map(|(s, _)| s)
}

/// Trains and reports per-epoch statistics; `track_loss` additionally
/// accumulates the objective.
pub fn train_sgns_with_stats(
    corpus: &Corpus,
    cfg: &TrainConfig,
    track_loss: bool,
) -> Result<(EmbeddingSpace, TrainStats)> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptySelection);
    }
    let vocab = build_vocabulary(corpus, cfg.min_count)?;
    let encoded = encode(corpus, &vocab);
    let sampler = NegativeSampler::new(vocab.counts(), cfg.neg_exponent)?;
    let total = vocab.total_tokens() as f64;
    let keep: Vec<f32> = vocab
        .counts()
        .iter()
        .map(|&c| keep_probability(cfg.subsample_t, c as f64 / total) as f32)
        .collect();

    let dim = cfg.dim;
    let n = vocab.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let half = 0.5 / dim as f32;
    let mut input: Vec<f32> = (0..n * dim)
        .map(|_| rng.random_range(-half..half))
        .collect();
    let mut output = vec![0.0f32; n * dim];

    let job = Job {
        cfg,
        sampler: &sampler,
        keep: &keep,
        articles: &encoded,
        total_work: (cfg.iterations as u64 * vocab.total_tokens()) as f64,
        processed: AtomicU64::new(0),
        track_loss,
    };

    let mut stats = TrainStats::default();
    let shared = Shared {
        input: input.as_mut_ptr(),
        output: output.as_mut_ptr(),
        dim,
    };
    let mut rngs: Vec<ChaCha8Rng> = (0..cfg.threads)
        .map(|t| {
            if t == 0 {
                rng.clone()
            } else {
                ChaCha8Rng::seed_from_u64(cfg.seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(t as u64)))
            }
        })
        .collect();

    for _ in 0..cfg.iterations {
        let (loss, pairs) = if cfg.threads == 1 {
            // SAFETY: single worker; the matrices are live and exclusively ours.
            unsafe { job.run_shard(&shared, 0, 1, &mut rngs[0]) }
        } else {
            let results: Vec<(f64, u64)> = std::thread::scope(|scope| {
                let handles: Vec<_> = rngs
                    .iter_mut()
                    .enumerate()
                    .map(|(t, r)| {
                        let job = &job;
                        let shared = &shared;
                        // SAFETY: unsynchronized updates across workers
                        // (Hogwild); every index is in bounds and the
                        // matrices outlive the scope.
                        scope.spawn(move || unsafe { job.run_shard(shared, t, cfg.threads, r) })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("training worker panicked"))
                    .collect()
            });
            results
                .into_iter()
                .fold((0.0, 0), |(l, p), (l2, p2)| (l + l2, p + p2))
        };
        stats.epoch_pairs.push(pairs);
        if track_loss {
            stats
                .epoch_losses
                .push(if pairs > 0 { loss / pairs as f64 } else { 0.0 });
        }
    }

    let meta = SpaceMetadata {
        config: cfg.clone(),
        corpus_tokens: corpus.token_count(),
    };
    let space = EmbeddingSpace::new(vocab, dim, input)?.with_training_state(output, meta);
    Ok((space, stats))
}

fn encode(corpus: &Corpus, vocab: &Vocabulary) -> Vec<Vec<u32>> {
    corpus
        .articles()
        .iter()
        .map(|a| {
            a.tokens()
                .filter_map(|t| vocab.index_of(t).map(|i| i as u32))
                .collect::<Vec<u32>>()
        })
        .filter(|v| !v.is_empty())
        .collect()
}

struct Shared {
    input: *mut f32,
    output: *mut f32,
    dim: usize,
}

// SAFETY: the raw matrices are shared for lock-free (Hogwild) updates;
// see `run_shard`.
unsafe impl Sync for Shared {}

#[allow(clippy::mut_from_ref)]
impl Shared {
    #[inline]
    unsafe fn input_row(&self, i: usize) -> &mut [f32] {
        std::slice::from_raw_parts_mut(self.input.add(i * self.dim), self.dim)
    }

    #[inline]
    unsafe fn output_row(&self, i: usize) -> &mut [f32] {
        std::slice::from_raw_parts_mut(self.output.add(i * self.dim), self.dim)
    }
}

struct Job<'a> {
    cfg: &'a TrainConfig,
    sampler: &'a NegativeSampler,
    keep: &'a [f32],
    articles: &'a [Vec<u32>],
    total_work: f64,
    processed: AtomicU64,
    track_loss: bool,
}

impl Job<'_> {
    /// One pass over articles `worker, worker + workers, ...`.
    ///
    /// Input and output rows live in distinct matrices, so the center row
    /// never aliases a target row within a worker.
    unsafe fn run_shard(
        &self,
        m: &Shared,
        worker: usize,
        workers: usize,
        rng: &mut ChaCha8Rng,
    ) -> (f64, u64) {
        let cfg = self.cfg;
        let lr0 = cfg.learning_rate as f32;
        let floor = lr0 * 1e-4;
        let mut scratch = vec![0.0f32; m.dim];
        let mut kept: Vec<u32> = Vec::new();
        let mut negs: Vec<usize> = Vec::with_capacity(cfg.negatives);
        let mut loss = 0.0f64;
        let mut pairs = 0u64;

        for article in self.articles.iter().skip(worker).step_by(workers) {
            let done = self
                .processed
                .fetch_add(article.len() as u64, Ordering::Relaxed) as f64;
            let lr = (lr0 * (1.0 - (done / self.total_work) as f32)).max(floor);

            kept.clear();
            for &w in article {
                let p = self.keep[w as usize];
                if p >= 1.0 || rng.random::<f32>() < p {
                    kept.push(w);
                }
            }

            for pos in 0..kept.len() {
                let radius = if cfg.dynamic_window {
                    rng.random_range(1..=cfg.window)
                } else {
                    cfg.window
                };
                let lo = pos.saturating_sub(radius);
                let hi = (pos + radius).min(kept.len() - 1);
                let center = kept[pos] as usize;
                for (off, &t) in kept[lo..=hi].iter().enumerate() {
                    if lo + off == pos {
                        continue;
                    }
                    let target = t as usize;
                    negs.clear();
                    for _ in 0..cfg.negatives {
                        let n = self.sampler.sample(rng);
                        if n != target {
                            negs.push(n);
                        }
                    }
                    let targets = std::iter::once((m.output_row(target), true))
                        .chain(negs.iter().map(|&n| (m.output_row(n), false)));
                    loss += sgd_step(m.input_row(center), targets, lr, &mut scratch, self.track_loss);
                    pairs += 1;
                }
            }
        }
        (loss, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Corpus {
        Corpus::from_texts(
            (0..40).map(|i| {
                if i % 2 == 0 {
                    "red green blue red green blue red green"
                } else {
                    "cat dog mouse cat dog mouse cat dog"
                }
            }),
        )
    }

    fn small_cfg() -> TrainConfig {
        TrainConfig {
            window: 2,
            dim: 8,
            min_count: 1,
            subsample_t: 1.0,
            iterations: 3,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn paper_defaults() {
        let c = TrainConfig::default();
        assert_eq!(
            (c.window, c.dim, c.min_count, c.negatives),
            (9, 100, 5, 5)
        );
        assert_eq!(c.learning_rate, 0.025);
        assert_eq!(c.subsample_t, 0.001);
        assert_eq!(c.neg_exponent, 0.75);
    }

    #[test]
    fn keep_probability_rules() {
        assert_eq!(keep_probability(1.0, 0.3), 1.0);
        assert_eq!(keep_probability(1e-3, 1e-3), 1.0);
        assert_eq!(keep_probability(1e-3, 1e-4), 1.0);
        assert!((keep_probability(1e-3, 0.1) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let a = train_sgns(&tiny(), &small_cfg()).unwrap();
        let b = train_sgns(&tiny(), &small_cfg()).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let c = train_sgns(&tiny(), &TrainConfig { seed: 1, ..small_cfg() }).unwrap();
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn initialization_range() {
        let cfg = TrainConfig {
            iterations: 1,
            learning_rate: 1e-12,
            ..small_cfg()
        };
        let s = train_sgns(&tiny(), &cfg).unwrap();
        let half = 0.5 / cfg.dim as f32;
        assert!(s.matrix().iter().all(|v| v.abs() <= half * 1.0001));
    }

    #[test]
    fn no_pairs_discarded_when_subsampling_disabled() {
        let (_, stats) = train_sgns_with_stats(&tiny(), &small_cfg(), false).unwrap();
        // 40 articles of 8 tokens, radius 2: per article 2*(1+2+2*5)... = 26 pairs
        assert!(stats.epoch_pairs.iter().all(|&p| p == 40 * 26));
    }

    #[test]
    fn multithreaded_runs_finish() {
        let cfg = TrainConfig {
            threads: 3,
            ..small_cfg()
        };
        let s = train_sgns(&tiny(), &cfg).unwrap();
        assert!(s.matrix().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = TrainConfig {
            negatives: 0,
            ..small_cfg()
        };
        assert!(train_sgns(&tiny(), &cfg).is_err());
        assert!(train_sgns(&Corpus::default(), &small_cfg()).is_err());
    }
}
