use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::correlation::{correlation, CorrelationMethod};
use super::judgments::Reliability;
use crate::error::{Error, Result};
use crate::similarity::PairScores;

pub const DEFAULT_N_BOOT: usize = 1000;
pub const MAX_REDRAWS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BootstrapOptions {
    pub n_boot: usize,
    pub seed: u64,
    pub method: CorrelationMethod,
}

impl Default for BootstrapOptions {
    fn default() -> Self {
        BootstrapOptions {
            n_boot: DEFAULT_N_BOOT,
            seed: 0,
            method: CorrelationMethod::Pearson,
        }
    }
}

impl BootstrapOptions {
    pub fn with_seed(seed: u64) -> Self {
        BootstrapOptions {
            seed,
            ..Default::default()
        }
    }
}

/// Bootstrap summary for one method against one truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: String,
    pub context: String,
    pub correlation: CorrelationMethod,
    /// Correlation on the full, unresampled pair set.
    pub r_full: f64,
    /// Mean correlation over resamples.
    pub r_mean: f64,
    pub ci95: [f64; 2],
    pub n_boot: usize,
    pub seed: u64,
    /// Keyed by the other method: p-value for this method beating it.
    pub p_values: BTreeMap<String, f64>,
    pub ensemble_size: Option<usize>,
    pub reliability: Option<Reliability>,
}

fn is_constant(v: impl Iterator<Item = f64>) -> bool {
    let mut it = v;
    match it.next() {
        Some(first) => it.all(|x| x == first),
        None => true,
    }
}

/// Per-resample correlations of each series against `truth`, with every
/// series sharing the same resample indices.
///
/// A resample where `truth` or any series is constant is redrawn, at most
/// [`MAX_REDRAWS`] times in a row.
pub fn bootstrap_correlations(
    series: &[&[f64]],
    truth: &[f64],
    opts: &BootstrapOptions,
) -> Result<Vec<Vec<f64>>> {
    let n = truth.len();
    for s in series {
        if s.len() != n {
            return Err(Error::Mismatch(format!("{} predictions vs {n} truths", s.len())));
        }
    }
    if opts.n_boot == 0 {
        return Err(Error::InvalidArgument("n_boot must be at least 1".into()));
    }
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "bootstrap needs at least 3 pairs, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut idx = vec![0usize; n];
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(opts.n_boot); series.len()];
    let mut xs = vec![0.0; n];
    let mut ys = vec![0.0; n];
    for _ in 0..opts.n_boot {
        let mut redraws = 0;
        loop {
            for i in idx.iter_mut() {
                *i = rng.random_range(0..n);
            }
            let degenerate = is_constant(idx.iter().map(|&i| truth[i]))
                || series.iter().any(|s| is_constant(idx.iter().map(|&i| s[i])));
            if !degenerate {
                break;
            }
            redraws += 1;
            if redraws > MAX_REDRAWS {
                return Err(Error::DegenerateBootstrap(MAX_REDRAWS));
            }
        }
        for (k, i) in idx.iter().enumerate() {
            ys[k] = truth[*i];
        }
        for (s, acc) in series.iter().zip(out.iter_mut()) {
            for (k, i) in idx.iter().enumerate() {
                xs[k] = s[*i];
            }
            acc.push(correlation(&xs, &ys, opts.method)?);
        }
    }
    Ok(out)
}

/// Linear-interpolation percentile of sorted data, `q` in [0, 1].
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn summarize(rs: &[f64]) -> (f64, [f64; 2]) {
    let mean = rs.iter().sum::<f64>() / rs.len() as f64;
    let mut sorted = rs.to_vec();
    sorted.sort_by(f64::total_cmp);
    (mean, [percentile(&sorted, 0.025), percentile(&sorted, 0.975)])
}

/// `1 − proportion(d > 0)`; exact zeros count against.
pub fn p_value(differences: &[f64]) -> f64 {
    let above = differences.iter().filter(|d| **d > 0.0).count();
    1.0 - above as f64 / differences.len() as f64
}

fn aligned(preds: &[&PairScores], truth: &PairScores) -> Result<Vec<Vec<f64>>> {
    preds.iter().map(|p| p.aligned_to(truth)).collect()
}

/// Reports for every prediction set, resampled jointly so each report's
/// `p_values` compares it against every other method on shared resamples.
pub fn evaluate(
    preds: &[&PairScores],
    truth: &PairScores,
    opts: &BootstrapOptions,
) -> Result<Vec<EvalReport>> {
    let cols = aligned(preds, truth)?;
    let slices: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
    let rs = bootstrap_correlations(&slices, &truth.scores, opts)?;
    let mut reports = Vec::with_capacity(preds.len());
    for (a, pred) in preds.iter().enumerate() {
        let (r_mean, ci95) = summarize(&rs[a]);
        let mut p_values = BTreeMap::new();
        for (b, other) in preds.iter().enumerate() {
            if a == b {
                continue;
            }
            let d: Vec<f64> = rs[a].iter().zip(&rs[b]).map(|(x, y)| x - y).collect();
            p_values.insert(other.method.clone(), p_value(&d));
        }
        reports.push(EvalReport {
            method: pred.method.clone(),
            context: truth.context.clone(),
            correlation: opts.method,
            r_full: correlation(&cols[a], &truth.scores, opts.method)?,
            r_mean,
            ci95,
            n_boot: opts.n_boot,
            seed: opts.seed,
            p_values,
            ensemble_size: None,
            reliability: None,
        });
    }
    Ok(reports)
}

/// Bootstrap mean and percentile 95% interval of the correlation between
/// `pred` and `truth`.
pub fn bootstrap_statistics(
    pred: &PairScores,
    truth: &PairScores,
    opts: &BootstrapOptions,
) -> Result<EvalReport> {
    Ok(evaluate(&[pred], truth, opts)?.remove(0))
}

/// Paired bootstrap p-value for `a` correlating better with `truth` than
/// `b`: one minus the share of resamples where `r_a − r_b > 0`.
pub fn compare_models(
    a: &PairScores,
    b: &PairScores,
    truth: &PairScores,
    opts: &BootstrapOptions,
) -> Result<f64> {
    let cols = aligned(&[a, b], truth)?;
    let rs = bootstrap_correlations(&[&cols[0], &cols[1]], &truth.scores, opts)?;
    let d: Vec<f64> = rs[0].iter().zip(&rs[1]).map(|(x, y)| x - y).collect();
    Ok(p_value(&d))
}

/// Elementwise mean over runs that cover the same pairs.
pub fn ensemble_mean(runs: &[PairScores]) -> Result<PairScores> {
    let first = runs
        .first()
        .ok_or_else(|| Error::InvalidArgument("ensemble of zero runs".into()))?;
    let mut sum = vec![0.0; first.len()];
    for run in runs {
        if !run.same_pairs(first) {
            return Err(Error::Mismatch(format!(
                "ensemble runs of method {} cover different pairs",
                run.method
            )));
        }
        for (s, v) in sum.iter_mut().zip(&run.scores) {
            *s += v;
        }
    }
    let n = runs.len() as f64;
    PairScores::new(
        first.context.clone(),
        first.method.clone(),
        first.pairs.clone(),
        sum.into_iter().map(|s| s / n).collect(),
    )
}
