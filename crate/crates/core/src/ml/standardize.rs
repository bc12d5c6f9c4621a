use ndarray::{Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use super::{Dataset, MlError};

/// Recorded preprocessing: optional `log10(1 + x)` per column, then
/// z-scoring with the population mean and standard deviation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardizeParams {
    pub log_columns: Vec<bool>,
    pub means: Vec<f64>,
    /// Zero marks a constant column, which standardizes to all zeros.
    pub stds: Vec<f64>,
}

impl StandardizeParams {
    pub fn n_features(&self) -> usize {
        self.means.len()
    }

    pub fn constant_columns(&self) -> Vec<usize> {
        (0..self.n_features())
            .filter(|&c| self.stds[c] == 0.0)
            .collect()
    }

    pub fn transform(&self, x: ArrayView2<f64>) -> Result<Array2<f64>, MlError> {
        if x.ncols() != self.n_features() {
            return Err(MlError::Dimension {
                expected: self.n_features(),
                found: x.ncols(),
            });
        }
        let mut out = log_transform(x, &self.log_columns)?;
        for (c, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
            let (mean, std) = (self.means[c], self.stds[c]);
            col.mapv_inplace(|v| if std == 0.0 { 0.0 } else { (v - mean) / std });
        }
        Ok(out)
    }

    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>, MlError> {
        let view = ArrayView2::from_shape((1, row.len()), row).expect("row shape");
        Ok(self.transform(view)?.into_raw_vec_and_offset().0)
    }
}

fn log_transform(x: ArrayView2<f64>, log_columns: &[bool]) -> Result<Array2<f64>, MlError> {
    let mut out = x.to_owned();
    for ((row, col), v) in out.indexed_iter_mut() {
        if !v.is_finite() {
            return Err(MlError::NonFinite { row, col });
        }
        if log_columns[col] {
            *v = (1.0 + *v).log10();
            if !v.is_finite() {
                return Err(MlError::NonFinite { row, col });
            }
        }
    }
    Ok(out)
}

/// Fits standardization on `x` and returns the transformed matrix.
pub fn fit_standardize(
    x: ArrayView2<f64>,
    log_columns: &[bool],
) -> Result<(Array2<f64>, StandardizeParams), MlError> {
    if x.nrows() == 0 {
        return Err(MlError::Empty);
    }
    if log_columns.len() != x.ncols() {
        return Err(MlError::Dimension {
            expected: x.ncols(),
            found: log_columns.len(),
        });
    }
    let logged = log_transform(x, log_columns)?;
    let n = logged.nrows() as f64;
    let mut means = Vec::with_capacity(x.ncols());
    let mut stds = Vec::with_capacity(x.ncols());
    for col in logged.axis_iter(Axis(1)) {
        let first = col[0];
        if col.iter().all(|&v| v == first) {
            means.push(first);
            stds.push(0.0);
            continue;
        }
        let mean = col.sum() / n;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        means.push(mean);
        stds.push(var.sqrt());
    }
    let params = StandardizeParams {
        log_columns: log_columns.to_vec(),
        means,
        stds,
    };
    let out = params.transform(x)?;
    Ok((out, params))
}

/// Standardizes a dataset's feature matrix.
pub fn standardize(d: &Dataset) -> Result<(Dataset, StandardizeParams), MlError> {
    let (features, params) = fit_standardize(d.features.view(), &d.log_columns)?;
    Ok((
        Dataset {
            features,
            ..d.clone()
        },
        params,
    ))
}
