//! Minimal dense-tensor engine with hand-derived backward passes.
//!
//! Just enough machinery for the two neural text classifiers: row-major
//! tensors, a named parameter store with gradient slots, forward/backward
//! implementations of the individual layers, Adam, and a central-difference
//! gradient checker. No graphs, no broadcasting; every backward pass is
//! written out by hand and verified against finite differences.

mod adam;
mod gradcheck;
mod gru;
mod loss;
mod ops;
mod params;

pub use adam::{adam_step, AdamState};
pub use gradcheck::grad_check;
pub use gru::{gru_cell_backward, gru_cell_forward, gru_scan, gru_scan_backward, GruCache, GruCellIds};
pub use loss::{bce_grad_wrt_logits, weighted_bce_loss};
pub use ops::{
    activation_backward, apply_activation, conv1d_backward, conv1d_forward, dense_backward,
    dense_forward, embedding_backward, embedding_forward, max_pool_time, max_pool_time_backward,
    Activation,
};
pub use params::{ParamEntry, ParamId, ParamStore};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },
    #[error("embedding id {id} out of range (vocab {vocab})")]
    IdOutOfRange { id: usize, vocab: usize },
    #[error("max pool over an empty time axis")]
    EmptyTime,
    #[error("empty input sequence")]
    EmptySequence,
    #[error("non-finite gradient in parameter {0:?}")]
    NonFiniteGradient(String),
    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },
    #[error("unknown parameter {0:?}")]
    UnknownParam(String),
}

/// Dense row-major tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor<S: Scalar> {
    shape: Vec<usize>,
    data: Vec<S>,
}

impl<S: Scalar> Tensor<S> {
    pub fn zeros(shape: &[usize]) -> Tensor<S> {
        Tensor {
            shape: shape.to_vec(),
            data: vec![S::zero(); shape.iter().product()],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<S>) -> Result<Tensor<S>, TensorError> {
        let expected: usize = shape.iter().product();
        if data.len() != expected {
            return Err(TensorError::ShapeMismatch {
                op: "from_vec",
                detail: format!("shape {:?} wants {expected} values, got {}", shape, data.len()),
            });
        }
        Ok(Tensor {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn from_f64s(shape: &[usize], data: &[f64]) -> Result<Tensor<S>, TensorError> {
        Self::from_vec(shape, data.iter().map(|&v| S::from_f64(v)).collect())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    /// Number of rows when 2-D.
    pub fn rows(&self) -> usize {
        self.shape[0]
    }

    /// Row length of a 2-D tensor.
    pub fn cols(&self) -> usize {
        self.shape[self.shape.len() - 1]
    }

    /// Row `i` of a 2-D tensor as a slice.
    pub fn row(&self, i: usize) -> &[S] {
        let cols = self.cols();
        &self.data[i * cols..(i + 1) * cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [S] {
        let cols = self.cols();
        &mut self.data[i * cols..(i + 1) * cols]
    }

    pub fn fill(&mut self, v: S) {
        self.data.fill(v);
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

#[inline]
pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

/// `grad += dy (outer) x`, row-major `[dy.len() x x.len()]`.
#[inline]
pub(crate) fn add_outer<S: Scalar>(grad: &mut [S], dy: &[S], x: &[S]) {
    debug_assert_eq!(grad.len(), dy.len() * x.len());
    for (i, &g) in dy.iter().enumerate() {
        let row = &mut grad[i * x.len()..(i + 1) * x.len()];
        for (slot, &v) in row.iter_mut().zip(x) {
            *slot += g * v;
        }
    }
}

/// `out += m^T dy` for row-major `m: [dy.len() x out.len()]`.
#[inline]
pub(crate) fn add_matvec_t<S: Scalar>(out: &mut [S], m: &[S], dy: &[S]) {
    debug_assert_eq!(m.len(), dy.len() * out.len());
    for (i, &g) in dy.iter().enumerate() {
        let row = &m[i * out.len()..(i + 1) * out.len()];
        for (slot, &v) in out.iter_mut().zip(row) {
            *slot += v * g;
        }
    }
}
