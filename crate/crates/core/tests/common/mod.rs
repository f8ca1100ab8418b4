//! Reference computations written independently of the library code.

#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Textbook two-pass sample correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `ln(1 + e^{-x})` evaluated directly.
fn softplus_neg(x: f64) -> f64 {
    (1.0 + (-x).exp()).ln()
}

/// Skip-gram negative-sampling loss from its definition.
pub fn sgns_loss(u: &[f64], v: &[f64], negs: &[Vec<f64>]) -> f64 {
    softplus_neg(dot(u, v)) + negs.iter().map(|n| softplus_neg(-dot(u, n))).sum::<f64>()
}

/// Central finite-difference gradient of `f` at `x`.
pub fn numeric_grad(x: &[f64], h: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// `‖a − b‖ / max(‖a‖ + ‖b‖, tiny)`.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) / (norm(a) + norm(b)).max(1e-300)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Affine least squares via the normal equations on `[1 | X]`.
/// Returns `(intercept, weights)`.
pub fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> (f64, Vec<f64>) {
    let p = x[0].len() + 1;
    let rows: Vec<Vec<f64>> = x
        .iter()
        .map(|r| std::iter::once(1.0).chain(r.iter().copied()).collect())
        .collect();
    let mut ata = vec![vec![0.0; p]; p];
    let mut aty = vec![0.0; p];
    for (r, &t) in rows.iter().zip(y) {
        for i in 0..p {
            aty[i] += r[i] * t;
            for j in 0..p {
                ata[i][j] += r[i] * r[j];
            }
        }
    }
    let sol = gauss_solve(ata, aty);
    (sol[0], sol[1..].to_vec())
}

/// Leave-one-out agreement of rater `who` against the mean of the others.
pub fn loo_r(ratings: &[Vec<f64>], who: usize) -> f64 {
    let n_cells = ratings[who].len();
    let others: Vec<f64> = (0..n_cells)
        .map(|c| {
            let vals: Vec<f64> = ratings
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != who)
                .map(|(_, r)| r[c])
                .collect();
            mean(&vals)
        })
        .collect();
    pearson(&ratings[who], &others)
}

pub fn uniform_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Standard normal via Box-Muller.
pub fn gauss(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn item_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("item{i}")).collect()
}
