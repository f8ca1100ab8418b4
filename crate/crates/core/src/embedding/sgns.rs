//! Skip-gram negative-sampling objective.
//!
//! For a center vector `u`, a positive context vector `v` and negative
//! context vectors `n_k`:
//!
//! ```text
//! L = -ln σ(u·v) - Σ_k ln σ(-u·n_k)
//! ```

/// Loss and analytic gradients for one training pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SgnsGradient {
    pub loss: f64,
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `-ln σ(x)`, stable for large `|x|`.
pub(crate) fn neg_log_sigmoid(x: f64) -> f64 {
    if x > 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Evaluates the objective and its gradient with respect to every input.
///
/// # Panics
/// If the vectors do not all share one dimension.
pub fn sgns_loss_and_grad(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> SgnsGradient {
    let dim = center.len();
    assert_eq!(context.len(), dim, "context dimension");
    assert!(
        negatives.iter().all(|n| n.len() == dim),
        "negative dimension"
    );

    let pos = dot(center, context);
    let mut loss = neg_log_sigmoid(pos);
    let g_pos = sigmoid(pos) - 1.0;
    let mut d_center: Vec<f64> = context.iter().map(|c| g_pos * c).collect();
    let d_context: Vec<f64> = center.iter().map(|u| g_pos * u).collect();

    let mut d_neg = Vec::with_capacity(negatives.len());
    for n in negatives {
        let s = dot(center, n);
        loss += neg_log_sigmoid(-s);
        let g = sigmoid(s);
        for (dc, nv) in d_center.iter_mut().zip(n.iter()) {
            *dc += g * nv;
        }
        d_neg.push(center.iter().map(|u| g * u).collect());
    }

    SgnsGradient {
        loss,
        center: d_center,
        context: d_context,
        negatives: d_neg,
    }
}

#[inline]
fn dot32(a: &[f32], b: &[f32]) -> f32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One in-place SGD step on the objective for `center` against `targets`,
/// where `targets[0]` is the positive context and the rest are negatives.
/// `scratch` must be `center.len()` long. Returns the pair loss when
/// `track_loss` is set (0 otherwise).
///
/// Target rows are updated sequentially, each from the unchanged center,
/// and the center receives the accumulated gradient at the end.
#[inline]
pub(crate) fn sgd_step<'a>(
    center: &mut [f32],
    targets: impl Iterator<Item = (&'a mut [f32], bool)>,
    lr: f32,
    scratch: &mut [f32],
    track_loss: bool,
) -> f64 {
    scratch.iter_mut().for_each(|s| *s = 0.0);
    let mut loss = 0.0f64;
    for (row, positive) in targets {
        let f = dot32(center, row);
        let label = if positive { 1.0 } else { 0.0 };
        let s = 1.0 / (1.0 + (-f).exp());
        if track_loss {
            let f = f as f64;
            loss += if positive {
                neg_log_sigmoid(f)
            } else {
                neg_log_sigmoid(-f)
            };
        }
        let g = lr * (label - s);
        for ((acc, r), c) in scratch.iter_mut().zip(row.iter_mut()).zip(center.iter()) {
            *acc += g * *r;
            *r += g * c;
        }
    }
    for (c, s) in center.iter_mut().zip(scratch.iter()) {
        *c += s;
    }
    loss
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_dots_give_ln2_per_term() {
        let z = [0.0; 4];
        let g = sgns_loss_and_grad(&z, &z, &[&z, &z, &z]);
        assert!((g.loss - 4.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn positive_gradient_at_orthogonal() {
        let u = [1.0, 0.0, 0.0];
        let v = [0.0, 1.0, 0.0];
        let g = sgns_loss_and_grad(&u, &v, &[]);
        assert_eq!(g.context, vec![-0.5, 0.0, 0.0]);
    }

    #[test]
    fn stable_log_sigmoid() {
        assert!((neg_log_sigmoid(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(neg_log_sigmoid(800.0).is_finite());
        assert!((neg_log_sigmoid(-800.0) - 800.0).abs() < 1e-9);
    }

    #[test]
    fn sgd_step_matches_gradient() {
        let u = [0.3f64, -0.2, 0.1];
        let v = [0.05f64, 0.4, -0.3];
        let n1 = [-0.2f64, 0.1, 0.25];
        let n2 = [0.15f64, -0.35, 0.05];
        let lr = 0.1;
        let g = sgns_loss_and_grad(&u, &v, &[&n1, &n2]);

        let to32 = |x: &[f64]| x.iter().map(|&a| a as f32).collect::<Vec<f32>>();
        let mut cu = to32(&u);
        let mut rows = [to32(&v), to32(&n1), to32(&n2)];
        let mut scratch = vec![0.0f32; 3];
        let [r0, r1, r2] = &mut rows;
        let loss = sgd_step(
            &mut cu,
            [(&mut r0[..], true), (&mut r1[..], false), (&mut r2[..], false)].into_iter(),
            lr as f32,
            &mut scratch,
            true,
        );
        assert!((loss - g.loss).abs() < 1e-6);
        for i in 0..3 {
            assert!((cu[i] as f64 - (u[i] - lr * g.center[i])).abs() < 1e-6);
            assert!((rows[0][i] as f64 - (v[i] - lr * g.context[i])).abs() < 1e-6);
            assert!((rows[1][i] as f64 - (n1[i] - lr * g.negatives[0][i])).abs() < 1e-6);
            assert!((rows[2][i] as f64 - (n2[i] - lr * g.negatives[1][i])).abs() < 1e-6);
        }
    }
}
