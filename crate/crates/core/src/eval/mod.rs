//! Evaluation: confusion matrices, macro-F1, cross-validation, reports.

mod cv;
mod metrics;
mod report;

pub use cv::{
    run_cross_validation, CvOutcome, CvReport, DocPrediction, FoldModel, FoldModelSpec,
    FoldTrainer, ModelSpec,
};
pub use metrics::{
    average_matrices, confusion_matrix, macro_f1, round_half_up_2dp, ConfusionMatrix,
};
pub use report::{render_text_report, render_stats_text};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("gold and predicted label lists differ in length: {gold} vs {pred}")]
    LengthMismatch { gold: usize, pred: usize },
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("averaging needs at least one matrix")]
    NoMatrices,
    #[error("cross-validation: {0}")]
    Fold(String),
}
