use rand::seq::SliceRandom;

use super::EvalError;
use crate::rng::{derive_seed, seeded, stream};

/// Partition of `0..N` into `k` disjoint test folds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldPlan {
    /// Sorted row indices of each test fold.
    pub folds: Vec<Vec<usize>>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.folds.len()
    }

    pub fn len(&self) -> usize {
        self.folds.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn test(&self, fold: usize) -> &[usize] {
        &self.folds[fold]
    }

    /// Every row outside `fold`, ascending.
    pub fn train(&self, fold: usize) -> Vec<usize> {
        let mut rows: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(f, _)| f != fold)
            .flat_map(|(_, rows)| rows.iter().copied())
            .collect();
        rows.sort_unstable();
        rows
    }

    /// Fold holding each row.
    pub fn fold_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for (f, rows) in self.folds.iter().enumerate() {
            for &i in rows {
                out[i] = f;
            }
        }
        out
    }
}

/// Stratified k-fold plan. Each class's rows are shuffled with
/// `derive_seed(seed, FOLD, class)` and dealt to folds round-robin. The
/// dealing position carries over from one class to the next, so fold sizes
/// also differ by at most one.
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<FoldPlan, EvalError> {
    let n = labels.len();
    if k < 2 {
        return Err(EvalError::Param(format!("fold count {k} is below 2")));
    }
    if k > n {
        return Err(EvalError::Param(format!(
            "fold count {k} exceeds the {n} available rows"
        )));
    }
    let n_classes = labels.iter().max().map_or(0, |&m| m + 1);
    let mut by_class = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for (class, mut rows) in by_class.into_iter().enumerate() {
        rows.shuffle(&mut seeded(derive_seed(seed, stream::FOLD, class as u64)));
        for i in rows {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(FoldPlan { folds, seed })
}
