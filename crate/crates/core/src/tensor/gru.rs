//! GRU cell and sequence scan with hand-derived backpropagation through time.
//!
//! Cell equations (z update gate, r reset gate):
//! ```text
//! z  = sigmoid(W_z x + U_z h + b_z)
//! r  = sigmoid(W_r x + U_r h + b_r)
//! h~ = tanh(W_h x + U_h (r . h) + b_h)
//! h' = (1 - z) . h + z . h~
//! ```

use super::{add_matvec_t, add_outer, dot, ParamId, ParamStore, Tensor, TensorError};
use crate::scalar::Scalar;

/// Handles for one direction's nine parameters, gate order z, r, h.
#[derive(Debug, Clone, Copy)]
pub struct GruCellIds {
    pub w: [ParamId; 3],
    pub u: [ParamId; 3],
    pub b: [ParamId; 3],
}

impl GruCellIds {
    /// Register fresh zero parameters `prefix.{w,u,b}_{z,r,h}` with input
    /// width `input_dim` and state width `hidden`.
    pub fn register<S: Scalar>(
        store: &mut ParamStore<S>,
        prefix: &str,
        input_dim: usize,
        hidden: usize,
    ) -> GruCellIds {
        let gate = ["z", "r", "h"];
        let w = std::array::from_fn(|g| {
            store.insert(&format!("{prefix}.w_{}", gate[g]), Tensor::zeros(&[hidden, input_dim]))
        });
        let u = std::array::from_fn(|g| {
            store.insert(&format!("{prefix}.u_{}", gate[g]), Tensor::zeros(&[hidden, hidden]))
        });
        let b = std::array::from_fn(|g| {
            store.insert(&format!("{prefix}.b_{}", gate[g]), Tensor::zeros(&[hidden]))
        });
        GruCellIds { w, u, b }
    }

    /// Resolve existing parameters registered by [`GruCellIds::register`].
    pub fn resolve<S: Scalar>(
        store: &ParamStore<S>,
        prefix: &str,
    ) -> Result<GruCellIds, TensorError> {
        let gate = ["z", "r", "h"];
        let mut w = [ParamId(0); 3];
        let mut u = [ParamId(0); 3];
        let mut b = [ParamId(0); 3];
        for g in 0..3 {
            w[g] = store.id(&format!("{prefix}.w_{}", gate[g]))?;
            u[g] = store.id(&format!("{prefix}.u_{}", gate[g]))?;
            b[g] = store.id(&format!("{prefix}.b_{}", gate[g]))?;
        }
        Ok(GruCellIds { w, u, b })
    }
}

/// Intermediates kept per step for the backward pass.
#[derive(Debug, Clone)]
pub struct GruCache<S: Scalar> {
    pub x: Vec<S>,
    pub h_prev: Vec<S>,
    pub z: Vec<S>,
    pub r: Vec<S>,
    pub h_tilde: Vec<S>,
    /// `r . h_prev`
    pub rh: Vec<S>,
}

fn gate_preact<S: Scalar>(
    store: &ParamStore<S>,
    w: ParamId,
    u: ParamId,
    b: ParamId,
    x: &[S],
    h: &[S],
) -> Vec<S> {
    let wt = store.value(w);
    let ut = store.value(u);
    let bt = store.value(b);
    let hidden = bt.len();
    let mut out = Vec::with_capacity(hidden);
    for i in 0..hidden {
        out.push(dot(wt.row(i), x) + dot(ut.row(i), h) + bt.data()[i]);
    }
    out
}

fn sigmoid<S: Scalar>(v: S) -> S {
    S::one() / (S::one() + (-v).exp())
}

/// One GRU step. Returns the next hidden state and the cache for backward.
pub fn gru_cell_forward<S: Scalar>(
    store: &ParamStore<S>,
    ids: &GruCellIds,
    x: &[S],
    h_prev: &[S],
) -> Result<(Vec<S>, GruCache<S>), TensorError> {
    let hidden = store.value(ids.b[0]).len();
    let input_dim = store.value(ids.w[0]).cols();
    if x.len() != input_dim || h_prev.len() != hidden {
        return Err(TensorError::ShapeMismatch {
            op: "gru_cell",
            detail: format!(
                "x len {} (want {input_dim}), h len {} (want {hidden})",
                x.len(),
                h_prev.len()
            ),
        });
    }

    let z: Vec<S> = gate_preact(store, ids.w[0], ids.u[0], ids.b[0], x, h_prev)
        .into_iter()
        .map(sigmoid)
        .collect();
    let r: Vec<S> = gate_preact(store, ids.w[1], ids.u[1], ids.b[1], x, h_prev)
        .into_iter()
        .map(sigmoid)
        .collect();
    let rh: Vec<S> = r.iter().zip(h_prev).map(|(&ri, &hi)| ri * hi).collect();
    let h_tilde: Vec<S> = gate_preact(store, ids.w[2], ids.u[2], ids.b[2], x, &rh)
        .into_iter()
        .map(|v| v.tanh())
        .collect();
    let h_next: Vec<S> = (0..hidden)
        .map(|i| (S::one() - z[i]) * h_prev[i] + z[i] * h_tilde[i])
        .collect();

    let cache = GruCache {
        x: x.to_vec(),
        h_prev: h_prev.to_vec(),
        z,
        r,
        h_tilde,
        rh,
    };
    Ok((h_next, cache))
}

/// Backward through one GRU step.
///
/// Accumulates parameter gradients into the store and returns
/// `(dx, dh_prev)` for the upstream gradient `dh` on the step's output.
pub fn gru_cell_backward<S: Scalar>(
    store: &mut ParamStore<S>,
    ids: &GruCellIds,
    cache: &GruCache<S>,
    dh: &[S],
) -> (Vec<S>, Vec<S>) {
    let hidden = dh.len();
    let input_dim = cache.x.len();

    // Local derivative vectors first (immutable reads only).
    let mut da_z = vec![S::zero(); hidden]; // dL/d preact of z
    let mut da_h = vec![S::zero(); hidden]; // dL/d preact of h~
    let mut dh_prev = vec![S::zero(); hidden];
    for i in 0..hidden {
        let z = cache.z[i];
        let ht = cache.h_tilde[i];
        let g = dh[i];
        // h' = (1-z) h + z h~
        da_z[i] = g * (ht - cache.h_prev[i]) * z * (S::one() - z);
        da_h[i] = g * z * (S::one() - ht * ht);
        dh_prev[i] = g * (S::one() - z);
    }

    // d(r.h) = U_h^T da_h
    let mut d_rh = vec![S::zero(); hidden];
    add_matvec_t(&mut d_rh, store.value(ids.u[2]).data(), &da_h);

    let mut da_r = vec![S::zero(); hidden];
    for i in 0..hidden {
        let r = cache.r[i];
        da_r[i] = d_rh[i] * cache.h_prev[i] * r * (S::one() - r);
        dh_prev[i] += d_rh[i] * r;
    }

    // dh_prev += U_z^T da_z + U_r^T da_r; dx = W^T da over all three gates
    add_matvec_t(&mut dh_prev, store.value(ids.u[0]).data(), &da_z);
    add_matvec_t(&mut dh_prev, store.value(ids.u[1]).data(), &da_r);
    let mut dx = vec![S::zero(); input_dim];
    add_matvec_t(&mut dx, store.value(ids.w[0]).data(), &da_z);
    add_matvec_t(&mut dx, store.value(ids.w[1]).data(), &da_r);
    add_matvec_t(&mut dx, store.value(ids.w[2]).data(), &da_h);

    // Parameter gradient accumulation (mutable phase).
    let das = [&da_z, &da_r, &da_h];
    let u_inputs: [&[S]; 3] = [&cache.h_prev, &cache.h_prev, &cache.rh];
    for g in 0..3 {
        add_outer(store.grad_mut(ids.w[g]).data_mut(), das[g], &cache.x);
        add_outer(store.grad_mut(ids.u[g]).data_mut(), das[g], u_inputs[g]);
        for (slot, &v) in store.grad_mut(ids.b[g]).data_mut().iter_mut().zip(das[g]) {
            *slot += v;
        }
    }

    (dx, dh_prev)
}

/// Scan a sequence of input rows from a zero initial state; `reverse`
/// consumes the rows back to front. Returns the final hidden state and the
/// per-step caches in scan order.
pub fn gru_scan<S: Scalar>(
    store: &ParamStore<S>,
    ids: &GruCellIds,
    xs: &Tensor<S>,
    reverse: bool,
) -> Result<(Vec<S>, Vec<GruCache<S>>), TensorError> {
    let steps = xs.rows();
    if steps == 0 {
        return Err(TensorError::EmptySequence);
    }
    let hidden = store.value(ids.b[0]).len();
    let mut h = vec![S::zero(); hidden];
    let mut caches = Vec::with_capacity(steps);
    for step in 0..steps {
        let t = if reverse { steps - 1 - step } else { step };
        let (next, cache) = gru_cell_forward(store, ids, xs.row(t), &h)?;
        h = next;
        caches.push(cache);
    }
    Ok((h, caches))
}

/// Backpropagate through a [`gru_scan`] whose only output is the final
/// state. Returns `dx` per original row position.
pub fn gru_scan_backward<S: Scalar>(
    store: &mut ParamStore<S>,
    ids: &GruCellIds,
    caches: &[GruCache<S>],
    d_final: &[S],
    reverse: bool,
) -> Tensor<S> {
    let steps = caches.len();
    let input_dim = caches[0].x.len();
    let mut dxs = Tensor::zeros(&[steps, input_dim]);
    let mut dh = d_final.to_vec();
    for step in (0..steps).rev() {
        let (dx, dh_prev) = gru_cell_backward(store, ids, &caches[step], &dh);
        let t = if reverse { steps - 1 - step } else { step };
        for (slot, &v) in dxs.row_mut(t).iter_mut().zip(&dx) {
            *slot += v;
        }
        dh = dh_prev;
    }
    dxs
}
