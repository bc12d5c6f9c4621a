use std::io::Write;

use rayon::prelude::*;

use super::confusion::{confusion, ConfusionMatrix};
use super::folds::{stratified_kfold, FoldPlan};
use super::{csv_writer, EvalError};
use crate::ml::{forest_train, Dataset, ForestParams, Prediction, StandardizeParams};
use crate::rng::{derive_seed, stream};

/// One held-out row the forest got wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Misclass {
    pub row: usize,
    pub name: String,
    pub truth: usize,
    pub predicted: usize,
    /// Tree votes per class.
    pub votes: Vec<usize>,
}

/// Rows whose pooled prediction differs from the truth, in row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisclassReport {
    pub labels: Vec<String>,
    pub entries: Vec<Misclass>,
}

impl MisclassReport {
    pub fn from_predictions(d: &Dataset, predictions: &[Prediction]) -> Self {
        let entries = predictions
            .iter()
            .enumerate()
            .filter(|(i, p)| p.label != d.labels[*i])
            .map(|(i, p)| Misclass {
                row: i,
                name: d.names[i].clone(),
                truth: d.labels[i],
                predicted: p.label,
                votes: p.votes.clone(),
            })
            .collect();
        Self {
            labels: d.label_names.clone(),
            entries,
        }
    }

    /// CSV `name,true,predicted,votes_<label>...`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), EvalError> {
        let mut w = csv_writer(out);
        let mut header: Vec<String> = ["name", "true", "predicted"].map(String::from).to_vec();
        header.extend(self.labels.iter().map(|l| format!("votes_{l}")));
        w.write_record(&header)?;
        for e in &self.entries {
            let mut record = vec![
                e.name.clone(),
                self.labels[e.truth].clone(),
                self.labels[e.predicted].clone(),
            ];
            record.extend(e.votes.iter().map(usize::to_string));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pooled outcome of a cross-validation run.
#[derive(Clone, Debug, PartialEq)]
pub struct CvResult {
    pub plan: FoldPlan,
    /// Held-out prediction for every row.
    pub predictions: Vec<Prediction>,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
    pub misclass: MisclassReport,
    /// Standardization fitted inside each fold, in fold order.
    pub fold_standardize: Vec<StandardizeParams>,
}

/// Stratified k-fold cross-validation of a random forest.
///
/// Each fold trains on its training rows alone, so standardization never
/// sees held-out data. Fold `f` trains with seed
/// `derive_seed(seed, CV_FOREST, f)` and the fold plan uses `seed` directly.
/// Folds run in parallel; results are stored by row index.
pub fn cross_validate(
    d: &Dataset,
    params: &ForestParams,
    k: usize,
    seed: u64,
) -> Result<CvResult, EvalError> {
    params.validate(d.n_features())?;
    let plan = stratified_kfold(&d.labels, k, seed)?;
    let fits = (0..plan.k())
        .into_par_iter()
        .map(|f| {
            let train = d.subset(&plan.train(f));
            let forest = forest_train(
                &train,
                params,
                derive_seed(seed, stream::CV_FOREST, f as u64),
            )?;
            let test = d.subset(plan.test(f));
            let predictions = forest.predict_rows(test.features.view())?;
            Ok((forest.standardize_params().clone(), predictions))
        })
        .collect::<Result<Vec<_>, EvalError>>()?;

    let mut slots: Vec<Option<Prediction>> = vec![None; d.len()];
    let mut fold_standardize = Vec::with_capacity(plan.k());
    for (f, (standardize, predictions)) in fits.into_iter().enumerate() {
        for (&row, p) in plan.test(f).iter().zip(predictions) {
            slots[row] = Some(p);
        }
        fold_standardize.push(standardize);
    }
    let predictions: Vec<Prediction> = slots
        .into_iter()
        .map(|p| p.expect("every row is held out once"))
        .collect();
    let predicted: Vec<usize> = predictions.iter().map(|p| p.label).collect();
    let confusion = confusion(&d.labels, &predicted, &d.label_names)?;
    let accuracy = confusion.accuracy()?;
    let misclass = MisclassReport::from_predictions(d, &predictions);
    Ok(CvResult {
        plan,
        predictions,
        accuracy,
        confusion,
        misclass,
        fold_standardize,
    })
}
