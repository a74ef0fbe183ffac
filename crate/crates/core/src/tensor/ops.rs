//! Layer forward/backward implementations: embedding lookup, 1-D valid
//! convolution over time, max pooling over time, activations, dense.

use serde::{Deserialize, Serialize};

use super::{add_matvec_t, add_outer, dot, Tensor, TensorError};
use crate::scalar::Scalar;

/// Gather embedding rows for a sequence of token ids.
///
/// Id 0 is the padding row; it stays all-zero by construction and the
/// backward pass never writes gradient into it.
pub fn embedding_forward<S: Scalar>(
    table: &Tensor<S>,
    ids: &[usize],
) -> Result<Tensor<S>, TensorError> {
    let vocab = table.rows();
    let dim = table.cols();
    let mut out = Tensor::zeros(&[ids.len(), dim]);
    for (pos, &id) in ids.iter().enumerate() {
        if id >= vocab {
            return Err(TensorError::IdOutOfRange { id, vocab });
        }
        out.row_mut(pos).copy_from_slice(table.row(id));
    }
    Ok(out)
}

/// Scatter-add output gradients into the table gradient; row 0 is frozen.
pub fn embedding_backward<S: Scalar>(
    grad_out: &Tensor<S>,
    ids: &[usize],
    table_grad: &mut Tensor<S>,
) {
    debug_assert_eq!(grad_out.rows(), ids.len());
    debug_assert_eq!(grad_out.cols(), table_grad.cols());
    for (pos, &id) in ids.iter().enumerate() {
        if id == 0 {
            continue;
        }
        let src = grad_out.row(pos);
        for (slot, &g) in table_grad.row_mut(id).iter_mut().zip(src) {
            *slot += g;
        }
    }
}

/// Valid (no padding) cross-correlation over the time axis, full width over
/// the feature axis: `out[t, f] = sum_{i, d} x[t+i, d] * filters[f, i, d] + bias[f]`.
pub fn conv1d_forward<S: Scalar>(
    x: &Tensor<S>,
    filters: &Tensor<S>,
    bias: &Tensor<S>,
) -> Result<Tensor<S>, TensorError> {
    let (l, d) = (x.rows(), x.cols());
    let [f, k, fd]: [usize; 3] = filters.shape().try_into().map_err(|_| {
        TensorError::ShapeMismatch {
            op: "conv1d",
            detail: format!("filters must be 3-D, got {:?}", filters.shape()),
        }
    })?;
    if fd != d || bias.len() != f || l < k {
        return Err(TensorError::ShapeMismatch {
            op: "conv1d",
            detail: format!(
                "x {:?}, filters {:?}, bias {:?}",
                x.shape(),
                filters.shape(),
                bias.shape()
            ),
        });
    }
    let out_len = l - k + 1;
    let mut out = Tensor::zeros(&[out_len, f]);
    for t in 0..out_len {
        let row = out.row_mut(t);
        for fi in 0..f {
            let mut acc = bias.data()[fi];
            for i in 0..k {
                let w = &filters.data()[(fi * k + i) * d..(fi * k + i + 1) * d];
                acc += dot(x.row(t + i), w);
            }
            row[fi] = acc;
        }
    }
    Ok(out)
}

/// Backward pass of [`conv1d_forward`]; accumulates into all three grads.
pub fn conv1d_backward<S: Scalar>(
    x: &Tensor<S>,
    filters: &Tensor<S>,
    grad_out: &Tensor<S>,
    dx: &mut Tensor<S>,
    dfilters: &mut Tensor<S>,
    dbias: &mut Tensor<S>,
) {
    let d = x.cols();
    let f = filters.shape()[0];
    let k = filters.shape()[1];
    let out_len = grad_out.rows();
    debug_assert_eq!(grad_out.cols(), f);
    for t in 0..out_len {
        let gy = grad_out.row(t);
        for fi in 0..f {
            let g = gy[fi];
            if g == S::zero() {
                continue;
            }
            dbias.data_mut()[fi] += g;
            for i in 0..k {
                let range = (fi * k + i) * d..(fi * k + i + 1) * d;
                let w = &filters.data()[range.clone()];
                let xr = x.row(t + i);
                let dxr = dx.row_mut(t + i);
                for j in 0..d {
                    dxr[j] += g * w[j];
                }
                let dw = &mut dfilters.data_mut()[range];
                for j in 0..d {
                    dw[j] += g * xr[j];
                }
            }
        }
    }
}

/// Column-wise max over the time axis; returns the pooled row and the
/// winning row index per column (first index on ties).
pub fn max_pool_time<S: Scalar>(x: &Tensor<S>) -> Result<(Tensor<S>, Vec<usize>), TensorError> {
    let (t, f) = (x.rows(), x.cols());
    if t == 0 {
        return Err(TensorError::EmptyTime);
    }
    let mut out = x.row(0).to_vec();
    let mut argmax = vec![0usize; f];
    for ti in 1..t {
        let row = x.row(ti);
        for fi in 0..f {
            if row[fi] > out[fi] {
                out[fi] = row[fi];
                argmax[fi] = ti;
            }
        }
    }
    Ok((Tensor::from_vec(&[f], out)?, argmax))
}

/// Route pooled gradients back to the argmax rows.
pub fn max_pool_time_backward<S: Scalar>(
    grad_out: &Tensor<S>,
    argmax: &[usize],
    dx: &mut Tensor<S>,
) {
    for (fi, (&g, &t)) in grad_out.data().iter().zip(argmax).enumerate() {
        dx.row_mut(t)[fi] += g;
    }
}

/// Elementwise activation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Elu,
    Sigmoid,
    Tanh,
}

impl Activation {
    #[inline]
    pub fn eval<S: Scalar>(self, v: S) -> S {
        match self {
            // alpha = 1
            Activation::Elu => {
                if v > S::zero() {
                    v
                } else {
                    v.exp() - S::one()
                }
            }
            Activation::Sigmoid => S::one() / (S::one() + (-v).exp()),
            Activation::Tanh => v.tanh(),
        }
    }

    /// Derivative expressed through input `v` and output `y = eval(v)`.
    #[inline]
    pub fn derivative<S: Scalar>(self, v: S, y: S) -> S {
        match self {
            Activation::Elu => {
                if v > S::zero() {
                    S::one()
                } else {
                    y + S::one() // e^v
                }
            }
            Activation::Sigmoid => y * (S::one() - y),
            Activation::Tanh => S::one() - y * y,
        }
    }
}

/// Elementwise activation over a whole tensor.
pub fn apply_activation<S: Scalar>(kind: Activation, x: &Tensor<S>) -> Tensor<S> {
    let data = x.data().iter().map(|&v| kind.eval(v)).collect();
    Tensor {
        shape: x.shape().to_vec(),
        data,
    }
}

/// Chain rule through [`apply_activation`]: `dx = grad_out * f'(x)`.
pub fn activation_backward<S: Scalar>(
    kind: Activation,
    x: &Tensor<S>,
    y: &Tensor<S>,
    grad_out: &Tensor<S>,
) -> Tensor<S> {
    let data = x
        .data()
        .iter()
        .zip(y.data())
        .zip(grad_out.data())
        .map(|((&v, &yv), &g)| g * kind.derivative(v, yv))
        .collect();
    Tensor {
        shape: x.shape().to_vec(),
        data,
    }
}

/// Affine layer `y = W x + b` with `W: [m x n]`.
pub fn dense_forward<S: Scalar>(
    x: &[S],
    w: &Tensor<S>,
    b: &Tensor<S>,
) -> Result<Vec<S>, TensorError> {
    let (m, n) = (w.rows(), w.cols());
    if x.len() != n || b.len() != m {
        return Err(TensorError::ShapeMismatch {
            op: "dense",
            detail: format!("x len {}, W {:?}, b {:?}", x.len(), w.shape(), b.shape()),
        });
    }
    let mut out = b.data().to_vec();
    for (i, slot) in out.iter_mut().enumerate() {
        *slot += dot(w.row(i), x);
    }
    Ok(out)
}

/// Backward pass of [`dense_forward`]: accumulates `dW += dy x^T`,
/// `db += dy`, `dx += W^T dy`.
pub fn dense_backward<S: Scalar>(
    x: &[S],
    w: &Tensor<S>,
    grad_out: &[S],
    dx: &mut [S],
    dw: &mut Tensor<S>,
    db: &mut Tensor<S>,
) {
    add_outer(dw.data_mut(), grad_out, x);
    for (slot, &g) in db.data_mut().iter_mut().zip(grad_out) {
        *slot += g;
    }
    add_matvec_t(dx, w.data(), grad_out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2(shape: [usize; 2], vals: &[f64]) -> Tensor<f64> {
        Tensor::from_f64s(&shape, vals).unwrap()
    }

    #[test]
    fn embedding_gathers_rows() {
        let table = t2([3, 2], &[0.0, 0.0, 1.0, 2.0, 3.0, 4.0]);
        let out = embedding_forward(&table, &[2, 1]).unwrap();
        assert_eq!(out.data(), &[3.0, 4.0, 1.0, 2.0]);
    }

    #[test]
    fn embedding_padding_ids_give_zero_rows() {
        let table = t2([3, 2], &[0.0, 0.0, 1.0, 2.0, 3.0, 4.0]);
        let out = embedding_forward(&table, &[0, 0, 0]).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn embedding_rejects_out_of_range_id() {
        let table = t2([3, 2], &[0.0; 6]);
        assert!(matches!(
            embedding_forward(&table, &[3]),
            Err(TensorError::IdOutOfRange { id: 3, vocab: 3 })
        ));
    }

    #[test]
    fn embedding_backward_scatter_adds_and_skips_row_zero() {
        let mut grad = Tensor::<f64>::zeros(&[3, 2]);
        let upstream = t2([2, 2], &[1.0, 1.0, 1.0, 1.0]);
        embedding_backward(&upstream, &[1, 1], &mut grad);
        assert_eq!(grad.row(1), &[2.0, 2.0]);
        assert_eq!(grad.row(0), &[0.0, 0.0]);

        let mut grad0 = Tensor::<f64>::zeros(&[3, 2]);
        embedding_backward(&upstream, &[0, 0], &mut grad0);
        assert!(grad0.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn conv_hand_example() {
        // x = (1,2,3), one filter of width 2 with weights (1,1), zero bias
        let x = t2([3, 1], &[1.0, 2.0, 3.0]);
        let filters = Tensor::from_f64s(&[1, 2, 1], &[1.0, 1.0]).unwrap();
        let bias = Tensor::from_f64s(&[1], &[0.0]).unwrap();
        let out = conv1d_forward(&x, &filters, &bias).unwrap();
        assert_eq!(out.shape(), &[2, 1]);
        assert_eq!(out.data(), &[3.0, 5.0]);
    }

    #[test]
    fn conv_zero_filters_output_bias() {
        let x = t2([4, 2], &[1.0; 8]);
        let filters = Tensor::<f64>::zeros(&[3, 2, 2]);
        let bias = Tensor::from_f64s(&[3], &[0.5, -1.0, 2.0]).unwrap();
        let out = conv1d_forward(&x, &filters, &bias).unwrap();
        for t in 0..out.rows() {
            assert_eq!(out.row(t), &[0.5, -1.0, 2.0]);
        }
    }

    #[test]
    fn conv_k1_identity_filter_copies_input_column() {
        let x = t2([3, 1], &[7.0, -2.0, 0.5]);
        let filters = Tensor::from_f64s(&[1, 1, 1], &[1.0]).unwrap();
        let bias = Tensor::from_f64s(&[1], &[0.0]).unwrap();
        let out = conv1d_forward(&x, &filters, &bias).unwrap();
        assert_eq!(out.data(), x.data());
    }

    #[test]
    fn conv_rejects_short_input() {
        let x = t2([1, 1], &[1.0]);
        let filters = Tensor::from_f64s(&[1, 2, 1], &[1.0, 1.0]).unwrap();
        let bias = Tensor::from_f64s(&[1], &[0.0]).unwrap();
        assert!(conv1d_forward(&x, &filters, &bias).is_err());
    }

    #[test]
    fn max_pool_columnwise_and_single_row() {
        let x = t2([2, 2], &[1.0, 5.0, 3.0, 2.0]);
        let (out, argmax) = max_pool_time(&x).unwrap();
        assert_eq!(out.data(), &[3.0, 5.0]);
        assert_eq!(argmax, vec![1, 0]);

        let single = t2([1, 3], &[1.0, 2.0, 3.0]);
        let (out, _) = max_pool_time(&single).unwrap();
        assert_eq!(out.data(), single.data());
    }

    #[test]
    fn max_pool_tie_routes_gradient_to_first_row() {
        let x = t2([2, 1], &[2.0, 2.0]);
        let (_, argmax) = max_pool_time(&x).unwrap();
        assert_eq!(argmax, vec![0]);
        let mut dx = Tensor::<f64>::zeros(&[2, 1]);
        max_pool_time_backward(&Tensor::from_f64s(&[1], &[1.0]).unwrap(), &argmax, &mut dx);
        assert_eq!(dx.data(), &[1.0, 0.0]);
    }

    #[test]
    fn max_pool_empty_time_is_an_error() {
        let x = Tensor::<f64>::zeros(&[0, 3]);
        assert!(matches!(max_pool_time(&x), Err(TensorError::EmptyTime)));
    }

    #[test]
    fn activation_values() {
        assert_eq!(Activation::Elu.eval(0.0), 0.0);
        assert_eq!(Activation::Elu.eval(1.0), 1.0);
        assert!((Activation::Elu.eval(-1.0) - ((-1.0f64).exp() - 1.0)).abs() < 1e-15);
        assert!((Activation::Elu.eval(-1.0f64) + 0.632121).abs() < 1e-6);
        assert_eq!(Activation::Sigmoid.eval(0.0), 0.5);
        assert!((Activation::Tanh.eval(1.0) - 1.0f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn dense_identity_and_bias_cases() {
        let identity = t2([2, 2], &[1.0, 0.0, 0.0, 1.0]);
        let b0 = Tensor::from_f64s(&[2], &[0.0, 0.0]).unwrap();
        assert_eq!(dense_forward(&[3.0, 4.0], &identity, &b0).unwrap(), vec![3.0, 4.0]);

        let zero_w = Tensor::<f64>::zeros(&[3, 2]);
        let ones = Tensor::from_f64s(&[3], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(
            dense_forward(&[9.0, -9.0], &zero_w, &ones).unwrap(),
            vec![1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn dense_hand_matrix_vector_product() {
        let w = t2([2, 2], &[1.0, 2.0, 3.0, 4.0]);
        let b = Tensor::from_f64s(&[2], &[0.5, -0.5]).unwrap();
        // by hand: (1*5 + 2*6 + 0.5, 3*5 + 4*6 - 0.5) = (17.5, 38.5)
        assert_eq!(
            dense_forward(&[5.0, 6.0], &w, &b).unwrap(),
            vec![17.5, 38.5]
        );
    }

    #[test]
    fn dense_shape_mismatch() {
        let w = Tensor::<f64>::zeros(&[2, 3]);
        let b = Tensor::<f64>::zeros(&[2]);
        assert!(dense_forward(&[1.0, 2.0], &w, &b).is_err());
    }

    #[test]
    fn forward_passes_are_pure() {
        let x = t2([3, 2], &[0.3, -0.7, 1.1, 0.0, -2.0, 0.5]);
        let a = apply_activation(Activation::Elu, &x);
        let b = apply_activation(Activation::Elu, &x);
        assert!(a
            .data()
            .iter()
            .zip(b.data())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}
