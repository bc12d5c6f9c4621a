//! Stratified cross-validation, confusion matrices, misclassification
//! reports and cluster/category overlap.

mod confusion;
mod cv;
mod folds;
mod overlap;

pub use confusion::{confusion, ConfusionMatrix};
pub use cv::{cross_validate, CvResult, Misclass, MisclassReport};
pub use folds::{stratified_kfold, FoldPlan};
pub use overlap::{
    cluster_category_overlap, MergeSuggestion, OverlapReport, DEFAULT_MERGE_THRESHOLD,
};

use crate::ml::MlError;

/// Fold count used when none is configured.
pub const DEFAULT_FOLDS: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    Length { expected: usize, found: usize },
    #[error("label {label} out of range for {classes} classes")]
    Label { label: usize, classes: usize },
    #[error("accuracy is undefined for an empty confusion matrix")]
    Empty,
    #[error(transparent)]
    Ml(#[from] MlError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn csv_writer<W: std::io::Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}
