use std::io::Write;

use super::{csv_writer, EvalError};
use crate::numfmt::format_real;

/// Co-clustering mass above which a category pair is suggested for merging.
pub const DEFAULT_MERGE_THRESHOLD: f64 = 0.6;

/// Advisory suggestion that two categories look alike to the clustering.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeSuggestion {
    pub a: usize,
    pub b: usize,
    pub mass: f64,
}

/// Cluster by category contingency table with purity and merge hints.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapReport {
    pub categories: Vec<String>,
    /// `table[cluster][category]` row counts.
    pub table: Vec<Vec<u64>>,
    /// Share of each cluster taken by its largest category; 0 for an empty
    /// cluster.
    pub purity: Vec<f64>,
    /// Rows belonging to their cluster's largest category, over all rows.
    pub overall_purity: f64,
    pub threshold: f64,
    pub suggestions: Vec<MergeSuggestion>,
}

/// Cross-tabulates cluster assignments against categories.
///
/// For categories `a` and `b`, let `frac_a(c)` be the share of `a`'s rows in
/// cluster `c`. Their co-clustering mass is the largest
/// `min(frac_a(c), frac_b(c))` over clusters, i.e. the share of both that
/// sits together in a single cluster. Pairs whose mass exceeds `threshold`
/// are suggested, strongest first.
pub fn cluster_category_overlap(
    assignments: &[usize],
    labels: &[usize],
    n_clusters: usize,
    categories: &[String],
    threshold: f64,
) -> Result<OverlapReport, EvalError> {
    if assignments.len() != labels.len() {
        return Err(EvalError::Length {
            expected: assignments.len(),
            found: labels.len(),
        });
    }
    let k = categories.len();
    let mut table = vec![vec![0u64; k]; n_clusters];
    for (&c, &l) in assignments.iter().zip(labels) {
        if c >= n_clusters {
            return Err(EvalError::Label {
                label: c,
                classes: n_clusters,
            });
        }
        if l >= k {
            return Err(EvalError::Label {
                label: l,
                classes: k,
            });
        }
        table[c][l] += 1;
    }
    let purity = table
        .iter()
        .map(|row| {
            let size: u64 = row.iter().sum();
            if size == 0 {
                0.0
            } else {
                *row.iter().max().expect("nonempty") as f64 / size as f64
            }
        })
        .collect();
    let majority: u64 = table
        .iter()
        .map(|row| row.iter().max().copied().unwrap_or(0))
        .sum();
    let overall_purity = if labels.is_empty() {
        0.0
    } else {
        majority as f64 / labels.len() as f64
    };

    let category_sizes: Vec<u64> = (0..k)
        .map(|l| table.iter().map(|row| row[l]).sum())
        .collect();
    let frac = |c: usize, l: usize| table[c][l] as f64 / category_sizes[l] as f64;
    let mut suggestions = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if category_sizes[a] == 0 || category_sizes[b] == 0 {
                continue;
            }
            let mass = (0..n_clusters)
                .map(|c| frac(c, a).min(frac(c, b)))
                .fold(0.0, f64::max);
            if mass > threshold {
                suggestions.push(MergeSuggestion { a, b, mass });
            }
        }
    }
    suggestions.sort_by(|x, y| y.mass.total_cmp(&x.mass).then((x.a, x.b).cmp(&(y.a, y.b))));
    Ok(OverlapReport {
        categories: categories.to_vec(),
        table,
        purity,
        overall_purity,
        threshold,
        suggestions,
    })
}

impl OverlapReport {
    /// CSV `cluster,size,purity,<category>...`, one row per cluster.
    pub fn write_table_csv<W: Write>(&self, out: W) -> Result<(), EvalError> {
        let mut w = csv_writer(out);
        let mut header: Vec<String> = ["cluster", "size", "purity"].map(String::from).to_vec();
        header.extend(self.categories.iter().cloned());
        w.write_record(&header)?;
        for (c, row) in self.table.iter().enumerate() {
            let mut record = vec![
                c.to_string(),
                row.iter().sum::<u64>().to_string(),
                format_real(self.purity[c]),
            ];
            record.extend(row.iter().map(u64::to_string));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// CSV `category_a,category_b,mass`.
    pub fn write_suggestions_csv<W: Write>(&self, out: W) -> Result<(), EvalError> {
        let mut w = csv_writer(out);
        w.write_record(["category_a", "category_b", "mass"])?;
        for s in &self.suggestions {
            w.write_record([
                self.categories[s.a].clone(),
                self.categories[s.b].clone(),
                format_real(s.mass),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
