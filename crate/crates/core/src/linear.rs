//! Class-weighted linear classifiers trained from scratch on sparse features:
//! multinomial logistic regression and one-vs-rest linear SVM.
//!
//! Both train with mini-batch (sub)gradient descent, batch 64, step
//! `lr0 / (1 + 0.01 * epoch)`, re-shuffling each epoch from the configured
//! seed. Regularization maps `C` as `lambda = 1/C` on the summed-loss
//! objective, which in per-example form becomes a weight-decay coefficient
//! of `1 / (C * n)` per step; biases are not regularized.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Label, NUM_CLASSES};
use crate::features::SparseVector;
use crate::rng;
use crate::scalar::Scalar;

/// Which linear classifier to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearKind {
    Logreg,
    Svm,
}

/// Training configuration shared by both linear models.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearConfig {
    pub kind: LinearKind,
    /// Inverse regularization strength; larger C means less regularization.
    pub c: f64,
    /// Reweight the loss by N / (K * N_c) per class.
    pub balanced: bool,
    pub epochs: usize,
    pub lr0: f64,
    pub seed: u64,
}

impl LinearConfig {
    pub fn new(kind: LinearKind, seed: u64) -> LinearConfig {
        LinearConfig {
            kind,
            c: 1.0,
            balanced: true,
            epochs: 50,
            lr0: 0.5,
            seed,
        }
    }

    fn validate(&self) -> Result<(), LinearError> {
        if !(self.c > 0.0) {
            return Err(LinearError::BadConfig("C must be positive".into()));
        }
        if self.epochs < 1 {
            return Err(LinearError::BadConfig("epochs must be at least 1".into()));
        }
        if !(self.lr0 > 0.0) {
            return Err(LinearError::BadConfig("lr0 must be positive".into()));
        }
        Ok(())
    }
}

const BATCH_SIZE: usize = 64;

#[derive(Debug, Error)]
pub enum LinearError {
    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("class {0} has zero count")]
    ZeroCount(usize),
    #[error("non-finite score encountered")]
    NonFinite,
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("invalid config: {0}")]
    BadConfig(String),
}

/// Trained linear classifier: one weight vector and bias per class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearModel<S: Scalar> {
    pub kind: LinearKind,
    /// `weights[c]` has the feature dimension.
    pub weights: [Vec<S>; NUM_CLASSES],
    pub bias: [S; NUM_CLASSES],
    pub class_weights: [f64; NUM_CLASSES],
}

impl<S: Scalar> LinearModel<S> {
    pub fn dim(&self) -> usize {
        self.weights[0].len()
    }

    /// Raw per-class scores `w_c . x + b_c`.
    pub fn decision_scores(&self, x: &SparseVector<S>) -> Result<[S; NUM_CLASSES], LinearError> {
        if x.dim != self.dim() {
            return Err(LinearError::DimensionMismatch {
                expected: self.dim(),
                got: x.dim,
            });
        }
        Ok(std::array::from_fn(|c| {
            x.dot_dense(&self.weights[c]) + self.bias[c]
        }))
    }

    /// Class probabilities: softmax of the decision scores. For the SVM this
    /// is a comparability transform, not a calibrated probability.
    pub fn predict_proba(&self, x: &SparseVector<S>) -> Result<[S; NUM_CLASSES], LinearError> {
        Ok(softmax(&self.decision_scores(x)?))
    }

    pub fn predict(&self, x: &SparseVector<S>) -> Result<Label, LinearError> {
        predict_label(&self.decision_scores(x)?)
    }
}

/// Numerically stable softmax.
pub fn softmax<S: Scalar>(scores: &[S; NUM_CLASSES]) -> [S; NUM_CLASSES] {
    let max = scores.iter().cloned().fold(S::neg_infinity(), S::max);
    let exps: [S; NUM_CLASSES] = std::array::from_fn(|c| (scores[c] - max).exp());
    let sum: S = exps.iter().cloned().sum();
    std::array::from_fn(|c| exps[c] / sum)
}

/// Argmax with ties broken toward the lowest class index.
pub fn predict_label<S: Scalar>(scores: &[S; NUM_CLASSES]) -> Result<Label, LinearError> {
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(LinearError::NonFinite);
    }
    let mut best = 0;
    for c in 1..NUM_CLASSES {
        if scores[c] > scores[best] {
            best = c;
        }
    }
    Ok(Label::from_code(best).expect("class index in range"))
}

/// Balanced class weights `w_c = N / (K * N_c)`.
pub fn class_weights(counts: [usize; NUM_CLASSES]) -> Result<[f64; NUM_CLASSES], LinearError> {
    for (c, &n) in counts.iter().enumerate() {
        if n == 0 {
            return Err(LinearError::ZeroCount(c));
        }
    }
    Ok(weights_lenient(counts))
}

/// Like [`class_weights`] but tolerates absent classes: a class with zero
/// count gets weight 1.0 (never used, since no example carries it).
pub fn weights_lenient(counts: [usize; NUM_CLASSES]) -> [f64; NUM_CLASSES] {
    let total: usize = counts.iter().sum();
    std::array::from_fn(|c| {
        if counts[c] == 0 {
            1.0
        } else {
            total as f64 / (NUM_CLASSES as f64 * counts[c] as f64)
        }
    })
}

fn check_dims<S: Scalar>(xs: &[SparseVector<S>], ys: &[Label]) -> Result<usize, LinearError> {
    if xs.is_empty() {
        return Err(LinearError::EmptyTrainingSet);
    }
    if xs.len() != ys.len() {
        return Err(LinearError::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    let dim = xs[0].dim;
    for x in xs {
        if x.dim != dim {
            return Err(LinearError::DimensionMismatch {
                expected: dim,
                got: x.dim,
            });
        }
    }
    Ok(dim)
}

fn effective_class_weights(ys: &[Label], balanced: bool) -> [f64; NUM_CLASSES] {
    if !balanced {
        return [1.0; NUM_CLASSES];
    }
    let mut counts = [0usize; NUM_CLASSES];
    for y in ys {
        counts[y.code()] += 1;
    }
    weights_lenient(counts)
}

/// Train multinomial logistic regression.
///
/// Objective: `sum_i cw(y_i) * CE_i + (1 / (2C)) * ||W||^2`, minimized by
/// mini-batch SGD on its per-example mean. Deterministic given the seed.
pub fn train_logreg<S: Scalar>(
    xs: &[SparseVector<S>],
    ys: &[Label],
    cfg: &LinearConfig,
) -> Result<LinearModel<S>, LinearError> {
    cfg.validate()?;
    let dim = check_dims(xs, ys)?;
    let n = xs.len();
    let cw = effective_class_weights(ys, cfg.balanced);
    let mut model = LinearModel {
        kind: LinearKind::Logreg,
        weights: std::array::from_fn(|_| vec![S::zero(); dim]),
        bias: [S::zero(); NUM_CLASSES],
        class_weights: cw,
    };

    let decay = 1.0 / (cfg.c * n as f64);
    let mut order: Vec<usize> = (0..n).collect();
    let mut shuffle_rng = rng::derived(cfg.seed, rng::stream::LINEAR_SHUFFLE);
    for epoch in 0..cfg.epochs {
        let lr = S::from_f64(cfg.lr0 / (1.0 + 0.01 * epoch as f64));
        order.shuffle(&mut shuffle_rng);
        for batch in order.chunks(BATCH_SIZE) {
            let scale = lr / S::from_usize(batch.len());
            // weight decay from the L2 term, applied once per step
            let keep = S::one() - lr * S::from_f64(decay);
            for w in &mut model.weights {
                for v in w.iter_mut() {
                    *v *= keep;
                }
            }
            for &i in batch {
                let x = &xs[i];
                let gold = ys[i].code();
                let probs = softmax(&std::array::from_fn(|c| {
                    x.dot_dense(&model.weights[c]) + model.bias[c]
                }));
                let weight = S::from_f64(cw[gold]);
                for c in 0..NUM_CLASSES {
                    let target = if c == gold { S::one() } else { S::zero() };
                    let err = weight * (probs[c] - target) * scale;
                    if err != S::zero() {
                        for &(j, v) in &x.entries {
                            model.weights[c][j] -= err * v;
                        }
                        model.bias[c] -= err;
                    }
                }
            }
        }
    }
    Ok(model)
}

/// Train a one-vs-rest linear SVM with hinge loss.
///
/// Per class `c` the objective is
/// `(1 / (2 * C * n)) * ||w_c||^2 + mean_i cw(y_i) * hinge(t_i * (w_c . x_i + b_c))`
/// with target `+1` for class `c` and `-1` otherwise, minimized by
/// subgradient SGD on the same schedule as logistic regression.
pub fn train_svm<S: Scalar>(
    xs: &[SparseVector<S>],
    ys: &[Label],
    cfg: &LinearConfig,
) -> Result<LinearModel<S>, LinearError> {
    cfg.validate()?;
    let dim = check_dims(xs, ys)?;
    let n = xs.len();
    let cw = effective_class_weights(ys, cfg.balanced);
    let mut model = LinearModel {
        kind: LinearKind::Svm,
        weights: std::array::from_fn(|_| vec![S::zero(); dim]),
        bias: [S::zero(); NUM_CLASSES],
        class_weights: cw,
    };

    let decay = 1.0 / (cfg.c * n as f64);
    let mut order: Vec<usize> = (0..n).collect();
    let mut shuffle_rng = rng::derived(cfg.seed, rng::stream::LINEAR_SHUFFLE);
    for epoch in 0..cfg.epochs {
        let lr = S::from_f64(cfg.lr0 / (1.0 + 0.01 * epoch as f64));
        order.shuffle(&mut shuffle_rng);
        for batch in order.chunks(BATCH_SIZE) {
            let scale = lr / S::from_usize(batch.len());
            let keep = S::one() - lr * S::from_f64(decay);
            for w in &mut model.weights {
                for v in w.iter_mut() {
                    *v *= keep;
                }
            }
            for &i in batch {
                let x = &xs[i];
                let gold = ys[i].code();
                let weight = S::from_f64(cw[gold]);
                for c in 0..NUM_CLASSES {
                    let target = if c == gold { S::one() } else { -S::one() };
                    let margin = (x.dot_dense(&model.weights[c]) + model.bias[c]) * target;
                    if margin < S::one() {
                        // subgradient of hinge: -t * x
                        let step = weight * target * scale;
                        for &(j, v) in &x.entries {
                            model.weights[c][j] += step * v;
                        }
                        model.bias[c] += step;
                    }
                }
            }
        }
    }
    Ok(model)
}

/// Train whichever model `cfg.kind` selects.
pub fn train_linear<S: Scalar>(
    xs: &[SparseVector<S>],
    ys: &[Label],
    cfg: &LinearConfig,
) -> Result<LinearModel<S>, LinearError> {
    match cfg.kind {
        LinearKind::Logreg => train_logreg(xs, ys, cfg),
        LinearKind::Svm => train_svm(xs, ys, cfg),
    }
}

/// Full-dataset objective value for the configured model; exposed for the
/// monotonicity tests.
pub fn objective<S: Scalar>(
    model: &LinearModel<S>,
    xs: &[SparseVector<S>],
    ys: &[Label],
    cfg: &LinearConfig,
) -> f64 {
    let n = xs.len() as f64;
    let cw = &model.class_weights;
    let mut loss = 0.0;
    match cfg.kind {
        LinearKind::Logreg => {
            for (x, y) in xs.iter().zip(ys) {
                let scores: [S; NUM_CLASSES] =
                    std::array::from_fn(|c| x.dot_dense(&model.weights[c]) + model.bias[c]);
                let probs = softmax(&scores);
                let p = probs[y.code()].as_f64().max(1e-300);
                loss += cw[y.code()] * -p.ln();
            }
        }
        LinearKind::Svm => {
            for (x, y) in xs.iter().zip(ys) {
                for c in 0..NUM_CLASSES {
                    let target = if c == y.code() { 1.0 } else { -1.0 };
                    let margin =
                        (x.dot_dense(&model.weights[c]) + model.bias[c]).as_f64() * target;
                    loss += cw[y.code()] * (1.0 - margin).max(0.0);
                }
            }
        }
    }
    loss /= n;
    let mut sq = 0.0;
    for w in &model.weights {
        for v in w {
            sq += v.as_f64() * v.as_f64();
        }
    }
    loss + sq / (2.0 * cfg.c * n)
}
