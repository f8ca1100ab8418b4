//! Semantic projection onto feature axes built from anchor words.
//!
//! An axis is the mean of all `high − low` anchor differences, which is the
//! same as `centroid(high) − centroid(low)`. A word's rating is its scalar
//! projection onto that axis.

mod anchors;
mod axis;

pub use anchors::{AnchorConfig, AnchorEntry, ANCHORS_PER_END};
pub use axis::{
    axis_pair_distance, build_axis, project_items, project_word, AnchorMode, FeatureAxis,
    RatingsMatrix,
};
