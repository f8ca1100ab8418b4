//! Test objects and feature names for the two semantic contexts.

pub const NATURE: &str = "nature";
pub const TRANSPORTATION: &str = "transportation";

pub const NATURE_ITEMS: [&str; 10] = [
    "bear", "cat", "deer", "duck", "parrot", "seal", "snake", "tiger", "turtle", "whale",
];

pub const TRANSPORTATION_ITEMS: [&str; 10] = [
    "airplane",
    "bicycle",
    "boat",
    "car",
    "helicopter",
    "motorcycle",
    "rocket",
    "shuttle",
    "submarine",
    "truck",
];

pub const NATURE_FEATURES: [&str; 12] = [
    "size",
    "domesticity",
    "predacity",
    "speed",
    "furriness",
    "aquatic-ness",
    "dangerousness",
    "edibility",
    "intelligence",
    "humanness",
    "cuteness",
    "interest",
];

pub const TRANSPORTATION_FEATURES: [&str; 12] = [
    "size",
    "cost",
    "openness",
    "speed",
    "wheeledness",
    "dangerousness",
    "elevation",
    "comfort",
    "skill",
    "personalness",
    "usefulness",
    "interest",
];

/// Category roots used to assemble each context's corpus.
pub const NATURE_ROOTS: [&str; 1] = ["animal"];
pub const NATURE_EXCLUDED_ROOTS: [&str; 1] = ["humans"];
pub const TRANSPORTATION_ROOTS: [&str; 2] = ["transport", "travel"];

/// Window sizes and dimensionalities of the hyperparameter grid.
pub const GRID_WINDOWS: [usize; 5] = [8, 9, 10, 11, 12];
pub const GRID_DIMS: [usize; 3] = [100, 150, 200];

/// Independently initialized models per ensemble.
pub const ENSEMBLE_SIZE: usize = 10;

pub fn items(context: &str) -> Option<&'static [&'static str]> {
    match context {
        NATURE => Some(&NATURE_ITEMS),
        TRANSPORTATION => Some(&TRANSPORTATION_ITEMS),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::{AnchorConfig, AnchorMode};

    #[test]
    fn features_match_anchor_defaults() {
        let cfg = AnchorConfig::default();
        for (ctx, feats) in [(NATURE, &NATURE_FEATURES), (TRANSPORTATION, &TRANSPORTATION_FEATURES)] {
            for mode in [AnchorMode::Contextual, AnchorMode::Adjective] {
                assert_eq!(cfg.features(ctx, mode), feats.to_vec());
            }
        }
    }

    #[test]
    fn ten_items_each() {
        assert_eq!(items(NATURE).unwrap().len(), 10);
        assert_eq!(items(TRANSPORTATION).unwrap().len(), 10);
        assert!(items("space").is_none());
    }
}
