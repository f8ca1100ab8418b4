use rand::distr::Distribution;
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;

use crate::error::{Error, Result};

/// Draws negative words with probability proportional to `count^exponent`.
#[derive(Debug, Clone)]
pub struct NegativeSampler {
    alias: WeightedAliasIndex<f64>,
    probs: Vec<f64>,
}

impl NegativeSampler {
    pub fn new(counts: &[u64], exponent: f64) -> Result<Self> {
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(exponent)).collect();
        let total: f64 = weights.iter().sum();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::InvalidArgument(
                "negative sampling weights must have a positive finite sum".into(),
            ));
        }
        let probs = weights.iter().map(|w| w / total).collect();
        let alias = WeightedAliasIndex::new(weights)
            .map_err(|e| Error::InvalidArgument(format!("negative sampler: {e}")))?;
        Ok(NegativeSampler { alias, probs })
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.alias.sample(rng)
    }

    /// Target probability of drawing word `i`.
    pub fn probability(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }
}
