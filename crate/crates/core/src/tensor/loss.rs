//! Per-class weighted binary cross-entropy over sigmoid outputs.

use crate::corpus::NUM_CLASSES;
use crate::scalar::Scalar;

const CLAMP: f64 = 1e-7;

/// Loss `-sum_c w_eff(c) * [t_c ln p_c + (1 - t_c) ln(1 - p_c)]` where
/// `w_eff(c)` is `w[gold]` on the gold coordinate and 1 elsewhere.
///
/// Probabilities are clamped to `[1e-7, 1 - 1e-7]` before the logs, making
/// the loss total. Returns `(loss, dloss/dp)`; the gradient is zero for
/// coordinates that were clamped.
pub fn weighted_bce_loss<S: Scalar>(
    p: &[S; NUM_CLASSES],
    target: &[S; NUM_CLASSES],
    w: &[S; NUM_CLASSES],
) -> (S, [S; NUM_CLASSES]) {
    let lo = S::from_f64(CLAMP);
    let hi = S::one() - lo;
    let gold = target
        .iter()
        .position(|&t| t > S::from_f64(0.5))
        .unwrap_or(0);
    let mut loss = S::zero();
    let mut dp = [S::zero(); NUM_CLASSES];
    for c in 0..NUM_CLASSES {
        let clamped = p[c].max(lo).min(hi);
        let weight = if c == gold { w[gold] } else { S::one() };
        let t = target[c];
        loss -= weight * (t * clamped.ln() + (S::one() - t) * (S::one() - clamped).ln());
        if p[c] > lo && p[c] < hi {
            dp[c] = weight * (clamped - t) / (clamped * (S::one() - clamped));
        }
    }
    (loss, dp)
}

/// Exact gradient of `weighted_bce_loss(sigmoid(s), target, w)` with respect
/// to the pre-sigmoid logits `s`: `w_eff(c) * (p_c - t_c)`.
///
/// The trainer uses this fused form; it is the analytic composition of the
/// unclamped loss with the sigmoid derivative and stays finite for any `s`.
pub fn bce_grad_wrt_logits<S: Scalar>(
    p: &[S; NUM_CLASSES],
    target: &[S; NUM_CLASSES],
    w: &[S; NUM_CLASSES],
) -> [S; NUM_CLASSES] {
    let gold = target
        .iter()
        .position(|&t| t > S::from_f64(0.5))
        .unwrap_or(0);
    std::array::from_fn(|c| {
        let weight = if c == gold { w[gold] } else { S::one() };
        weight * (p[c] - target[c])
    })
}
