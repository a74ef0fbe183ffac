//! Named parameter store with per-parameter gradient slots.

use serde::{Deserialize, Serialize};

use super::{Tensor, TensorError};
use crate::scalar::Scalar;

/// Handle into a [`ParamStore`], resolved once at model construction so the
/// training loops never do string lookups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamId(pub(crate) usize);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamEntry<S: Scalar> {
    pub name: String,
    pub value: Tensor<S>,
    pub grad: Tensor<S>,
    /// Non-trainable entries are skipped by the optimizer (frozen embeddings).
    pub trainable: bool,
}

/// Ordered collection of named parameters. Insertion order is the iteration
/// order everywhere (optimizer, serialization, gradient checks), which keeps
/// training bitwise reproducible.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ParamStore<S: Scalar> {
    entries: Vec<ParamEntry<S>>,
}

impl<S: Scalar> ParamStore<S> {
    pub fn new() -> ParamStore<S> {
        ParamStore { entries: Vec::new() }
    }

    /// Register a parameter; its gradient slot starts at zero with the same
    /// shape. Names must be unique.
    pub fn insert(&mut self, name: &str, value: Tensor<S>) -> ParamId {
        assert!(
            self.entries.iter().all(|e| e.name != name),
            "duplicate parameter name {name:?}"
        );
        let grad = Tensor::zeros(value.shape());
        self.entries.push(ParamEntry {
            name: name.to_string(),
            value,
            grad,
            trainable: true,
        });
        ParamId(self.entries.len() - 1)
    }

    pub fn id(&self, name: &str) -> Result<ParamId, TensorError> {
        self.entries
            .iter()
            .position(|e| e.name == name)
            .map(ParamId)
            .ok_or_else(|| TensorError::UnknownParam(name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value(&self, id: ParamId) -> &Tensor<S> {
        &self.entries[id.0].value
    }

    pub fn value_mut(&mut self, id: ParamId) -> &mut Tensor<S> {
        &mut self.entries[id.0].value
    }

    pub fn grad(&self, id: ParamId) -> &Tensor<S> {
        &self.entries[id.0].grad
    }

    pub fn grad_mut(&mut self, id: ParamId) -> &mut Tensor<S> {
        &mut self.entries[id.0].grad
    }

    pub fn set_trainable(&mut self, id: ParamId, trainable: bool) {
        self.entries[id.0].trainable = trainable;
    }

    pub fn entries(&self) -> &[ParamEntry<S>] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [ParamEntry<S>] {
        &mut self.entries
    }

    pub fn zero_grads(&mut self) {
        for entry in &mut self.entries {
            entry.grad.fill(S::zero());
        }
    }

    /// Total parameter count (scalar elements).
    pub fn num_values(&self) -> usize {
        self.entries.iter().map(|e| e.value.len()).sum()
    }

    /// Global L2 norm of all gradients.
    pub fn grad_norm(&self) -> S {
        let mut sq = S::zero();
        for e in &self.entries {
            for &g in e.grad.data() {
                sq += g * g;
            }
        }
        sq.sqrt()
    }

    /// Scale every gradient so the global norm does not exceed `max_norm`.
    pub fn clip_grad_norm(&mut self, max_norm: S) {
        let norm = self.grad_norm();
        if norm > max_norm {
            let scale = max_norm / norm;
            for e in &mut self.entries {
                for g in e.grad.data_mut() {
                    *g *= scale;
                }
            }
        }
    }
}
