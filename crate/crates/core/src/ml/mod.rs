//! Learning machinery: standardization, CART trees, random forests,
//! k-means and exact t-SNE.

mod dataset;
mod forest;
mod kmeans;
mod standardize;
mod tree;
pub mod tsne;

pub use dataset::Dataset;
pub use forest::{forest_train, Forest, ForestParams, Prediction, MODEL_FORMAT, MODEL_VERSION};
pub use kmeans::{kmeans, ClusterResult, KMeansParams};
pub use standardize::{fit_standardize, standardize, StandardizeParams};
pub use tree::{gini, train_tree, DecisionTree, TreeNode};
pub use tsne::{tsne, Embedding, TsneParams};

#[derive(Debug, thiserror::Error)]
pub enum MlError {
    #[error("empty input")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("label {label} out of range for {classes} classes")]
    Label { label: usize, classes: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("model file: {0}")]
    Model(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
