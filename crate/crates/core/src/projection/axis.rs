use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingSpace;
use crate::error::{Error, Result};

/// How a feature axis chooses its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorMode {
    /// In-domain objects at each extreme.
    Contextual,
    /// Generic antonym adjectives.
    Adjective,
}

impl std::fmt::Display for AnchorMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AnchorMode::Contextual => "contextual",
            AnchorMode::Adjective => "adjective",
        })
    }
}

impl std::str::FromStr for AnchorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contextual" => Ok(AnchorMode::Contextual),
            "adjective" => Ok(AnchorMode::Adjective),
            other => Err(Error::InvalidArgument(format!(
                "unknown anchor mode `{other}` (expected contextual or adjective)"
            ))),
        }
    }
}

/// A named direction running from the low anchors to the high anchors.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureAxis {
    pub name: String,
    pub low_anchors: Vec<String>,
    pub high_anchors: Vec<String>,
    pub mode: AnchorMode,
    axis: Vec<f64>,
    norm: f64,
}

impl FeatureAxis {
    /// Wraps a raw direction; fails if it is (numerically) zero.
    pub fn from_direction(name: impl Into<String>, axis: Vec<f64>) -> Result<Self> {
        let name = name.into();
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm.is_nan() || norm < 1e-12 {
            return Err(Error::DegenerateAxis(name));
        }
        Ok(FeatureAxis {
            name,
            low_anchors: Vec::new(),
            high_anchors: Vec::new(),
            mode: AnchorMode::Contextual,
            axis,
            norm,
        })
    }

    pub fn direction(&self) -> &[f64] {
        &self.axis
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.axis.len()
    }

    /// Scalar projection `axis·v / ‖axis‖`.
    pub fn project(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.axis.len());
        self.axis.iter().zip(v).map(|(a, x)| a * x).sum::<f64>() / self.norm
    }
}

/// Mean of the `|lows| × |highs|` differences `high_j − low_i`.
pub fn build_axis<S: AsRef<str>>(
    space: &EmbeddingSpace,
    name: &str,
    mode: AnchorMode,
    lows: &[S],
    highs: &[S],
) -> Result<FeatureAxis> {
    if lows.is_empty() || highs.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "feature `{name}` needs at least one anchor at each end"
        )));
    }
    let fetch = |ws: &[S]| -> Result<Vec<Vec<f64>>> {
        ws.iter().map(|w| space.vector_f64(w.as_ref())).collect()
    };
    let low = fetch(lows)?;
    let high = fetch(highs)?;

    let mut axis = vec![0.0; space.dim()];
    for h in &high {
        for l in &low {
            for ((a, hv), lv) in axis.iter_mut().zip(h).zip(l) {
                *a += hv - lv;
            }
        }
    }
    let pairs = (low.len() * high.len()) as f64;
    axis.iter_mut().for_each(|a| *a /= pairs);

    let mut out = FeatureAxis::from_direction(name, axis)?;
    out.low_anchors = lows.iter().map(|s| s.as_ref().to_owned()).collect();
    out.high_anchors = highs.iter().map(|s| s.as_ref().to_owned()).collect();
    out.mode = mode;
    Ok(out)
}

/// Rating of `word` on `axis`.
pub fn project_word(space: &EmbeddingSpace, word: &str, axis: &FeatureAxis) -> Result<f64> {
    check_dim(space, axis)?;
    Ok(axis.project(&space.vector_f64(word)?))
}

/// Projected distance `axis·(v1 − v2) / ‖axis‖` between two words.
pub fn axis_pair_distance(
    space: &EmbeddingSpace,
    w1: &str,
    w2: &str,
    axis: &FeatureAxis,
) -> Result<f64> {
    check_dim(space, axis)?;
    let a = space.vector_f64(w1)?;
    let b = space.vector_f64(w2)?;
    let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    Ok(axis.project(&diff))
}

fn check_dim(space: &EmbeddingSpace, axis: &FeatureAxis) -> Result<()> {
    if space.dim() != axis.dim() {
        return Err(Error::Mismatch(format!(
            "axis `{}` has dimension {} but space has {}",
            axis.name,
            axis.dim(),
            space.dim()
        )));
    }
    Ok(())
}

/// Items × features matrix of projected ratings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingsMatrix {
    pub items: Vec<String>,
    pub features: Vec<String>,
    /// `values[i][k]` is item `i` on feature `k`.
    pub values: Vec<Vec<f64>>,
}

impl RatingsMatrix {
    pub fn new(items: Vec<String>, features: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != items.len() || values.iter().any(|r| r.len() != features.len()) {
            return Err(Error::Mismatch(format!(
                "ratings shape must be {} × {}",
                items.len(),
                features.len()
            )));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("ratings"));
        }
        Ok(RatingsMatrix {
            items,
            features,
            values,
        })
    }

    pub fn row(&self, item: &str) -> Option<&[f64]> {
        self.items
            .iter()
            .position(|i| i == item)
            .map(|i| self.values[i].as_slice())
    }

    pub fn column(&self, feature: &str) -> Option<Vec<f64>> {
        let k = self.features.iter().position(|f| f == feature)?;
        Some(self.values.iter().map(|r| r[k]).collect())
    }

    /// Smallest and largest rating, or `None` when empty.
    pub fn range(&self) -> Option<(f64, f64)> {
        let mut it = self.values.iter().flatten().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }
}

/// Rates every item on every axis.
pub fn project_items<S: AsRef<str>>(
    space: &EmbeddingSpace,
    items: &[S],
    axes: &[FeatureAxis],
) -> Result<RatingsMatrix> {
    for a in axes {
        check_dim(space, a)?;
    }
    let values = items
        .iter()
        .map(|w| {
            let v = space.vector_f64(w.as_ref())?;
            Ok(axes.iter().map(|a| a.project(&v)).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    RatingsMatrix::new(
        items.iter().map(|s| s.as_ref().to_owned()).collect(),
        axes.iter().map(|a| a.name.clone()).collect(),
        values,
    )
}
