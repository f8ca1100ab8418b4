use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Affine model `y ≈ x·weights + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub labels: Vec<String>,
}

impl RegressionModel {
    pub fn predict(&self, row: &[f64]) -> f64 {
        self.intercept + self.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }
}

/// Ordinary least squares with an unpenalized intercept.
///
/// Columns and targets are centered, then the weights are the
/// pseudo-inverse solution of the centered system, so underdetermined
/// problems get the minimum-norm weight vector.
pub fn fit_least_squares(x: &DMatrix<f64>, y: &[f64]) -> Result<RegressionModel> {
    let (m, p) = x.shape();
    if m == 0 || m != y.len() {
        return Err(Error::Mismatch(format!(
            "design has {m} rows, targets have {}",
            y.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("design matrix"));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("regression targets"));
    }

    let y_mean = y.iter().sum::<f64>() / m as f64;
    let col_means: Vec<f64> = (0..p).map(|j| x.column(j).mean()).collect();
    let xc = DMatrix::from_fn(m, p, |i, j| x[(i, j)] - col_means[j]);
    let yc = DVector::from_iterator(m, y.iter().map(|v| v - y_mean));

    let weights: Vec<f64> = if p == 0 {
        Vec::new()
    } else {
        let svd = xc.svd(true, true);
        let smax = svd.singular_values.max();
        if smax == 0.0 {
            vec![0.0; p]
        } else {
            let tol = smax * (m.max(p) as f64) * f64::EPSILON;
            let w = svd
                .solve(&yc, tol)
                .map_err(|e| Error::InvalidArgument(format!("least squares: {e}")))?;
            w.iter().copied().collect()
        }
    };
    let intercept = y_mean - weights.iter().zip(&col_means).map(|(w, c)| w * c).sum::<f64>();
    if weights.iter().any(|w| !w.is_finite()) || !intercept.is_finite() {
        return Err(Error::NonFinite("regression solution"));
    }
    Ok(RegressionModel {
        weights,
        intercept,
        labels: Vec::new(),
    })
}
