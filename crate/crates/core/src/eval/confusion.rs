use std::io::Write;

use super::{csv_writer, EvalError};

/// Counts of (true, predicted) class pairs. Rows are true classes and
/// columns predicted classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

/// Tabulates predictions against truth. The class count is
/// `labels.len()`.
pub fn confusion(
    truth: &[usize],
    predicted: &[usize],
    labels: &[String],
) -> Result<ConfusionMatrix, EvalError> {
    if truth.len() != predicted.len() {
        return Err(EvalError::Length {
            expected: truth.len(),
            found: predicted.len(),
        });
    }
    let k = labels.len();
    let mut counts = vec![vec![0u64; k]; k];
    for (&t, &p) in truth.iter().zip(predicted) {
        if let Some(&label) = [t, p].iter().find(|&&l| l >= k) {
            return Err(EvalError::Label { label, classes: k });
        }
        counts[t][p] += 1;
    }
    Ok(ConfusionMatrix {
        labels: labels.to_vec(),
        counts,
    })
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn off_diagonal(&self) -> u64 {
        self.total() - self.trace()
    }

    /// Rows per true class.
    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    /// `trace / total`; an error when the matrix is empty.
    pub fn accuracy(&self) -> Result<f64, EvalError> {
        match self.total() {
            0 => Err(EvalError::Empty),
            n => Ok(self.trace() as f64 / n as f64),
        }
    }

    /// CSV with the predicted labels as header and the true label leading
    /// each row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), EvalError> {
        let mut w = csv_writer(out);
        let mut header = vec!["true\\predicted".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header)?;
        for (label, row) in self.labels.iter().zip(&self.counts) {
            let mut record = vec![label.clone()];
            record.extend(row.iter().map(u64::to_string));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Right-aligned plain-text rendering of the matrix.
    pub fn to_text_table(&self) -> String {
        let mut cells = vec![std::iter::once(String::new())
            .chain(self.labels.iter().cloned())
            .collect::<Vec<_>>()];
        for (label, row) in self.labels.iter().zip(&self.counts) {
            cells.push(
                std::iter::once(label.clone())
                    .chain(row.iter().map(u64::to_string))
                    .collect(),
            );
        }
        let widths: Vec<usize> = (0..=self.labels.len())
            .map(|c| {
                cells
                    .iter()
                    .map(|r| r[c].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (cell, &w))| {
                    if c == 0 {
                        format!("{cell:<w$}")
                    } else {
                        format!("{cell:>w$}")
                    }
                })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}
