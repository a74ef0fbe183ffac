//! Sparse feature vectors.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Sparse vector: strictly increasing indices, nonzero values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector<S: Scalar> {
    pub dim: usize,
    pub entries: Vec<(usize, S)>,
}

impl<S: Scalar> SparseVector<S> {
    pub fn empty(dim: usize) -> SparseVector<S> {
        SparseVector {
            dim,
            entries: Vec::new(),
        }
    }

    /// Build from (index, value) pairs; pairs must have unique indices and
    /// indices < dim. Zero values are dropped and entries sorted.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(usize, S)>) -> SparseVector<S> {
        pairs.retain(|(_, v)| *v != S::zero());
        pairs.sort_unstable_by_key(|(i, _)| *i);
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0), "duplicate index");
        debug_assert!(pairs.iter().all(|(i, _)| *i < dim), "index out of range");
        SparseVector { dim, entries: pairs }
    }

    pub fn l2_norm(&self) -> S {
        self.entries
            .iter()
            .map(|(_, v)| *v * *v)
            .fold(S::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Scale every value so the L2 norm becomes 1; the zero vector stays zero.
    pub fn l2_normalize(&mut self) {
        let norm = self.l2_norm();
        if norm > S::zero() {
            for (_, v) in &mut self.entries {
                *v /= norm;
            }
        }
    }

    /// Dot product against a dense slice of length `dim`.
    pub fn dot_dense(&self, dense: &[S]) -> S {
        debug_assert_eq!(dense.len(), self.dim);
        self.entries
            .iter()
            .map(|(i, v)| *v * dense[*i])
            .fold(S::zero(), |a, b| a + b)
    }
}

/// Concatenate sparse blocks into one vector; block `i`'s indices are
/// shifted by the summed dims of blocks `0..i`, values unchanged.
pub fn union_features<S: Scalar>(parts: &[SparseVector<S>]) -> SparseVector<S> {
    let dim = parts.iter().map(|p| p.dim).sum();
    let mut entries = Vec::with_capacity(parts.iter().map(|p| p.entries.len()).sum());
    let mut offset = 0;
    for part in parts {
        entries.extend(part.entries.iter().map(|(i, v)| (i + offset, *v)));
        offset += part.dim;
    }
    SparseVector { dim, entries }
}
