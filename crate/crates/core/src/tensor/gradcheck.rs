//! Central-difference gradient verification.

use super::ParamStore;
use crate::scalar::Scalar;

/// Compare the analytic gradients already stored in `store` against central
/// differences of `loss` and return the maximum relative error.
///
/// For every coordinate of every parameter the check evaluates
/// `(loss(x + eps) - loss(x - eps)) / (2 eps)` and measures
/// `|analytic - numeric| / max(1e-8, |analytic| + |numeric|)`.
/// Run in 64-bit; the quoted thresholds assume `f64`.
pub fn grad_check<S, F>(store: &mut ParamStore<S>, mut loss: F, eps: f64) -> f64
where
    S: Scalar,
    F: FnMut(&ParamStore<S>) -> S,
{
    let eps_s = S::from_f64(eps);
    let mut max_rel = 0.0f64;
    for idx in 0..store.len() {
        let id = super::ParamId(idx);
        for j in 0..store.value(id).len() {
            let original = store.value(id).data()[j];
            store.value_mut(id).data_mut()[j] = original + eps_s;
            let plus = loss(store).as_f64();
            store.value_mut(id).data_mut()[j] = original - eps_s;
            let minus = loss(store).as_f64();
            store.value_mut(id).data_mut()[j] = original;

            let numeric = (plus - minus) / (2.0 * eps);
            let analytic = store.grad(id).data()[j].as_f64();
            let rel = (analytic - numeric).abs() / (analytic.abs() + numeric.abs()).max(1e-8);
            if rel > max_rel {
                max_rel = rel;
            }
        }
    }
    max_rel
}
