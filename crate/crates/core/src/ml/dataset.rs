use std::collections::BTreeSet;

use ndarray::{Array2, Axis};

use super::MlError;
use crate::features::{FeatureRow, COUNT_COLUMNS, FEATURE_COUNT, FEATURE_NAMES};

/// Labeled design matrix: one row per graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    /// Class index per row, `< label_names.len()`.
    pub labels: Vec<usize>,
    pub label_names: Vec<String>,
    pub features: Array2<f64>,
    /// Columns that get `log10(1 + x)` before z-scoring.
    pub log_columns: Vec<bool>,
}

impl Dataset {
    pub fn new(
        names: Vec<String>,
        labels: Vec<usize>,
        label_names: Vec<String>,
        features: Array2<f64>,
        log_columns: Vec<bool>,
    ) -> Result<Self, MlError> {
        let n = features.nrows();
        for len in [names.len(), labels.len()] {
            if len != n {
                return Err(MlError::Dimension {
                    expected: n,
                    found: len,
                });
            }
        }
        if log_columns.len() != features.ncols() {
            return Err(MlError::Dimension {
                expected: features.ncols(),
                found: log_columns.len(),
            });
        }
        if label_names.is_empty() {
            return Err(MlError::Param("at least one class is required".into()));
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= label_names.len()) {
            return Err(MlError::Label {
                label,
                classes: label_names.len(),
            });
        }
        if let Some(((row, col), _)) = features.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(MlError::NonFinite { row, col });
        }
        Ok(Self {
            names,
            labels,
            label_names,
            features,
            log_columns,
        })
    }

    /// Builds a dataset from feature rows. Classes are the distinct
    /// categories in lexicographic order; every row must be labeled.
    pub fn from_feature_rows(rows: &[FeatureRow]) -> Result<Self, MlError> {
        if rows.is_empty() {
            return Err(MlError::Empty);
        }
        let mut categories = BTreeSet::new();
        for (i, row) in rows.iter().enumerate() {
            match &row.category {
                Some(c) => {
                    categories.insert(c.clone());
                }
                None => {
                    return Err(MlError::Param(format!(
                        "row {} ({}) has no category",
                        i, row.name
                    )))
                }
            }
        }
        let label_names: Vec<String> = categories.into_iter().collect();
        let labels = rows
            .iter()
            .map(|r| {
                let c = r.category.as_deref().expect("checked above");
                label_names
                    .binary_search_by(|l| l.as_str().cmp(c))
                    .expect("known category")
            })
            .collect();
        let mut features = Array2::zeros((rows.len(), FEATURE_COUNT));
        for (mut out, row) in features.axis_iter_mut(Axis(0)).zip(rows) {
            out.assign(&ndarray::aview1(&row.features.to_array()));
        }
        Self::new(
            rows.iter().map(|r| r.name.clone()).collect(),
            labels,
            label_names,
            features,
            COUNT_COLUMNS.to_vec(),
        )
    }

    pub fn len(&self) -> usize {
        self.features.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_classes(&self) -> usize {
        self.label_names.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn column_names(&self) -> Vec<String> {
        if self.n_features() == FEATURE_COUNT && self.log_columns == COUNT_COLUMNS {
            FEATURE_NAMES.iter().map(|s| s.to_string()).collect()
        } else {
            (0..self.n_features()).map(|i| format!("x{i}")).collect()
        }
    }

    /// Rows `indices` (in that order) with the same label table.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            label_names: self.label_names.clone(),
            features: self.features.select(Axis(0), indices),
            log_columns: self.log_columns.clone(),
        }
    }
}
