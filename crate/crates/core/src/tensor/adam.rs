//! Adam optimizer over a [`ParamStore`].

use super::{ParamStore, Tensor, TensorError};
use crate::scalar::Scalar;

/// Bias-corrected Adam state: one first/second moment tensor per parameter,
/// aligned with the store's entry order.
#[derive(Debug, Clone)]
pub struct AdamState<S: Scalar> {
    pub lr: S,
    pub beta1: S,
    pub beta2: S,
    pub eps: S,
    pub t: u64,
    m: Vec<Tensor<S>>,
    v: Vec<Tensor<S>>,
}

impl<S: Scalar> AdamState<S> {
    pub fn new(store: &ParamStore<S>, lr: f64) -> AdamState<S> {
        AdamState {
            lr: S::from_f64(lr),
            beta1: S::from_f64(0.9),
            beta2: S::from_f64(0.999),
            eps: S::from_f64(1e-8),
            t: 0,
            m: store.entries().iter().map(|e| Tensor::zeros(e.value.shape())).collect(),
            v: store.entries().iter().map(|e| Tensor::zeros(e.value.shape())).collect(),
        }
    }
}

/// One Adam update over every trainable parameter, then zero all gradients.
///
/// Rejects non-finite gradients by parameter name before touching anything.
pub fn adam_step<S: Scalar>(
    store: &mut ParamStore<S>,
    state: &mut AdamState<S>,
) -> Result<(), TensorError> {
    for entry in store.entries() {
        if entry.trainable && !entry.grad.all_finite() {
            return Err(TensorError::NonFiniteGradient(entry.name.clone()));
        }
    }
    state.t += 1;
    let t = state.t as i32;
    let bc1 = S::one() - state.beta1.powi(t);
    let bc2 = S::one() - state.beta2.powi(t);
    let one = S::one();

    for (i, entry) in store.entries_mut().iter_mut().enumerate() {
        if entry.trainable {
            let m = state.m[i].data_mut();
            let v = state.v[i].data_mut();
            let value = entry.value.data_mut();
            let grad = entry.grad.data();
            for j in 0..value.len() {
                let g = grad[j];
                m[j] = state.beta1 * m[j] + (one - state.beta1) * g;
                v[j] = state.beta2 * v[j] + (one - state.beta2) * g * g;
                let m_hat = m[j] / bc1;
                let v_hat = v[j] / bc2;
                value[j] -= state.lr * m_hat / (v_hat.sqrt() + state.eps);
            }
        }
        entry.grad.fill(S::zero());
    }
    Ok(())
}
