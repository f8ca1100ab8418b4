//! Human data, correlations and bootstrap statistics.

mod bootstrap;
mod correlation;
mod judgments;

pub use bootstrap::{
    bootstrap_correlations, bootstrap_statistics, compare_models, ensemble_mean, evaluate,
    p_value, percentile, BootstrapOptions, EvalReport, DEFAULT_N_BOOT, MAX_REDRAWS,
};
pub use correlation::{average_ranks, correlation, pearson, spearman, CorrelationMethod};
pub use judgments::{
    filter_participants, loo_correlations, mean_feature_ratings, mean_pair_scores, mean_truth,
    pair_cell, read_feature_ratings, read_judgments, reliability_ceiling, Cell, JudgmentKind,
    JudgmentSet, Reliability, Removal, RemovalReason, Response,
};
