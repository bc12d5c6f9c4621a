use std::io::{Read, Write};

use ndarray::ArrayView2;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::standardize::{fit_standardize, StandardizeParams};
use super::tree::{argmax, grow, DecisionTree};
use super::{Dataset, MlError};
use crate::rng::{derive_seed, seeded, stream};

/// `format` field of a serialized forest.
pub const MODEL_FORMAT: &str = "netclass-forest";
/// Current model file version; loaders reject anything else.
pub const MODEL_VERSION: u32 = 1;

/// Random forest hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` means `round(sqrt(D))`.
    pub features_per_split: Option<usize>,
    pub min_split: usize,
    /// Train each tree on a bootstrap resample; otherwise on all rows.
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            features_per_split: None,
            min_split: 2,
            bootstrap: true,
        }
    }
}

impl ForestParams {
    pub fn resolved_features_per_split(&self, n_features: usize) -> usize {
        self.features_per_split
            .unwrap_or_else(|| ((n_features as f64).sqrt().round() as usize).max(1))
    }

    pub fn validate(&self, n_features: usize) -> Result<(), MlError> {
        if self.n_trees == 0 {
            return Err(MlError::Param("n_trees must be at least 1".into()));
        }
        let k = self.resolved_features_per_split(n_features);
        if k == 0 || k > n_features {
            return Err(MlError::Param(format!(
                "features_per_split {k} outside 1..={n_features}"
            )));
        }
        if self.min_split == 0 {
            return Err(MlError::Param("min_split must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct SeededTree {
    seed: u64,
    #[serde(flatten)]
    tree: DecisionTree,
}

/// Trained random forest. Inputs are raw feature vectors; the recorded
/// standardization is applied before the trees see them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    format: String,
    version: u32,
    params: ForestParams,
    n_features: usize,
    labels: Vec<String>,
    standardize: StandardizeParams,
    trees: Vec<SeededTree>,
}

/// Forest output for one input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub label: usize,
    /// Trees voting for each class; sums to the tree count.
    pub votes: Vec<usize>,
}

/// Trains a forest on `d`. Tree `t` uses seed
/// `derive_seed(master_seed, TREE, t)` for both its bootstrap sample and
/// its feature subsets, so training is independent of thread scheduling.
pub fn forest_train(
    d: &Dataset,
    params: &ForestParams,
    master_seed: u64,
) -> Result<Forest, MlError> {
    if d.is_empty() {
        return Err(MlError::Empty);
    }
    params.validate(d.n_features())?;
    let (x, standardize) = fit_standardize(d.features.view(), &d.log_columns)?;
    let k = params.resolved_features_per_split(d.n_features());
    let n = d.len();

    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(master_seed, stream::TREE, t as u64);
            let mut rng = seeded(seed);
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            let tree = grow(
                x.view(),
                &d.labels,
                d.n_classes(),
                rows,
                k,
                params.min_split,
                &mut rng,
            )?;
            Ok(SeededTree { seed, tree })
        })
        .collect::<Result<Vec<_>, MlError>>()?;

    Ok(Forest {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        params: ForestParams {
            features_per_split: Some(k),
            ..params.clone()
        },
        n_features: d.n_features(),
        labels: d.label_names.clone(),
        standardize,
        trees,
    })
}

impl Forest {
    pub fn params(&self) -> &ForestParams {
        &self.params
    }

    pub fn label_names(&self) -> &[String] {
        &self.labels
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn standardize_params(&self) -> &StandardizeParams {
        &self.standardize
    }

    pub fn trees(&self) -> impl Iterator<Item = &DecisionTree> {
        self.trees.iter().map(|t| &t.tree)
    }

    pub fn tree_seeds(&self) -> Vec<u64> {
        self.trees.iter().map(|t| t.seed).collect()
    }

    /// Majority vote over trees, each voting its leaf's majority class.
    /// Ties go to the lowest class index.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction, MlError> {
        if x.len() != self.n_features {
            return Err(MlError::Dimension {
                expected: self.n_features,
                found: x.len(),
            });
        }
        let z = self.standardize.transform_row(x)?;
        let mut votes = vec![0usize; self.labels.len()];
        for t in &self.trees {
            votes[t.tree.predict(&z)] += 1;
        }
        let counts: Vec<u32> = votes.iter().map(|&v| v as u32).collect();
        Ok(Prediction {
            label: argmax(&counts),
            votes,
        })
    }

    pub fn predict_rows(&self, x: ArrayView2<f64>) -> Result<Vec<Prediction>, MlError> {
        x.rows()
            .into_iter()
            .map(|row| self.predict(&row.to_vec()))
            .collect()
    }

    /// Fraction of `d`'s rows predicted correctly.
    pub fn accuracy(&self, d: &Dataset) -> Result<f64, MlError> {
        if d.is_empty() {
            return Err(MlError::Empty);
        }
        let preds = self.predict_rows(d.features.view())?;
        let hits = preds
            .iter()
            .zip(&d.labels)
            .filter(|(p, &l)| p.label == l)
            .count();
        Ok(hits as f64 / d.len() as f64)
    }

    /// Writes the model as pretty-printed JSON.
    pub fn save<W: Write>(&self, out: W) -> Result<(), MlError> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("forest serializes")
    }

    /// Loads a model, rejecting other formats and versions before decoding
    /// the body.
    pub fn load<R: Read>(input: R) -> Result<Self, MlError> {
        let value: serde_json::Value = serde_json::from_reader(input)?;
        match value.get("format").and_then(|f| f.as_str()) {
            Some(MODEL_FORMAT) => {}
            Some(other) => return Err(MlError::Model(format!("unknown format {other:?}"))),
            None => return Err(MlError::Model("missing format field".into())),
        }
        match value.get("version").and_then(|v| v.as_u64()) {
            Some(v) if v == MODEL_VERSION as u64 => {}
            Some(v) => {
                return Err(MlError::Model(format!(
                    "unsupported version {v}, this build reads version {MODEL_VERSION}"
                )))
            }
            None => return Err(MlError::Model("missing version field".into())),
        }
        let forest: Forest = serde_json::from_value(value)?;
        forest.validate()?;
        Ok(forest)
    }

    fn validate(&self) -> Result<(), MlError> {
        let bad = |msg: &str| Err(MlError::Model(msg.into()));
        if self.trees.is_empty() {
            return bad("no trees");
        }
        if self.labels.is_empty() {
            return bad("empty label table");
        }
        let s = &self.standardize;
        if s.means.len() != self.n_features
            || s.stds.len() != self.n_features
            || s.log_columns.len() != self.n_features
        {
            return bad("standardization does not match feature count");
        }
        for t in &self.trees {
            t.tree.validate(self.n_features, self.labels.len())?;
        }
        Ok(())
    }
}
