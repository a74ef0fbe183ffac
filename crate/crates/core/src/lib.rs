//! Building blocks for three-class comment classification experiments.
//!
//! The crate implements the full experiment stack from scratch: corpus
//! loading and cleaning, word/char TF-IDF features, class-weighted logistic
//! regression and linear SVM, a small dense-tensor engine with hand-derived
//! backward passes powering a Text-CNN and a bidirectional GRU, stratified
//! k-fold cross-validation with macro-F1 and fold-averaged confusion
//! matrices, a soft-vote ensemble, and a lexicon-driven error analysis.
//!
//! All numeric code is generic over the floating-point element type through
//! the [`Scalar`] trait; concrete `f64` aliases for the main types live at
//! the crate root. Every random choice flows from a single caller-supplied
//! seed, so identical inputs produce bitwise-identical models and reports.

pub mod corpus;
// pub mod ensemble;
// pub mod eval;
pub mod features;
// pub mod fixtures;
pub mod linear;
// pub mod neural;
// pub mod persist;
pub mod rng;
pub mod scalar;
pub mod tensor;

pub use scalar::Scalar;

/// Dense tensor with `f64` elements, the precision used in tests and the CLI.
pub type Tensor64 = tensor::Tensor<f64>;
/// Dense tensor with `f32` elements for memory-constrained runs.
pub type Tensor32 = tensor::Tensor<f32>;
/// Sparse feature vector over `f64`.
pub type SparseVector64 = features::SparseVector<f64>;
/// Fitted TF-IDF vectorizer over `f64`.
pub type TfidfModel64 = features::TfidfModel<f64>;
/// Linear classifier (logistic regression or SVM) over `f64`.
pub type LinearModel64 = linear::LinearModel<f64>;
/// Named-parameter store over `f64`.
pub type ParamStore64 = tensor::ParamStore<f64>;
