use ndarray::ArrayView2;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MlError;
use crate::rng::seeded;

/// Splits must improve Gini impurity by more than this to be accepted.
const MIN_GAIN: f64 = 1e-12;

/// Node of a [`DecisionTree`]; children are indices into the node arena.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    /// Per-class counts of the training rows routed here.
    Leaf { counts: Vec<u32> },
}

/// CART classification tree stored as a flat arena, root at index 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn leaf(&self, x: &[f64]) -> &[u32] {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    id = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
                TreeNode::Leaf { counts } => return counts,
            }
        }
    }

    /// Majority class of the leaf reached by `x`, lowest index on ties.
    pub fn predict(&self, x: &[f64]) -> usize {
        argmax(self.leaf(x))
    }

    pub fn depth(&self) -> usize {
        let mut deepest = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, d)) = stack.pop() {
            deepest = deepest.max(d);
            if let TreeNode::Split { left, right, .. } = self.nodes[id] {
                stack.push((left, d + 1));
                stack.push((right, d + 1));
            }
        }
        deepest
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    pub(crate) fn validate(&self, n_features: usize, n_classes: usize) -> Result<(), MlError> {
        let bad = |msg: String| Err(MlError::Model(msg));
        if self.nodes.is_empty() {
            return bad("tree without nodes".into());
        }
        // Children always follow their parent, which also rules out cycles.
        for (id, node) in self.nodes.iter().enumerate() {
            match node {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    if *feature >= n_features || !threshold.is_finite() {
                        return bad(format!("node {id}: invalid split"));
                    }
                    if *left <= id
                        || *right <= id
                        || *left >= self.nodes.len()
                        || *right >= self.nodes.len()
                    {
                        return bad(format!("node {id}: invalid child index"));
                    }
                }
                TreeNode::Leaf { counts } => {
                    if counts.len() != n_classes {
                        return bad(format!("node {id}: expected {n_classes} class counts"));
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn argmax(counts: &[u32]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Trains a tree on every row of `x`.
///
/// At each node a random subset of `features_per_split` features is
/// searched for the split with the largest Gini gain, thresholds being
/// midpoints between consecutive distinct values. If no feature in the
/// subset yields a positive gain, the remaining features are tried in random
/// order and the first with a positive-gain split is used. Growth stops at
/// pure nodes, nodes with fewer than `min_split` rows, and nodes without a
/// positive-gain split.
pub fn train_tree(
    x: ArrayView2<f64>,
    labels: &[usize],
    n_classes: usize,
    features_per_split: usize,
    min_split: usize,
    seed: u64,
) -> Result<DecisionTree, MlError> {
    if x.nrows() == 0 {
        return Err(MlError::Empty);
    }
    if labels.len() != x.nrows() {
        return Err(MlError::Dimension {
            expected: x.nrows(),
            found: labels.len(),
        });
    }
    let mut rng = seeded(seed);
    grow(
        x,
        labels,
        n_classes,
        (0..x.nrows()).collect(),
        features_per_split,
        min_split,
        &mut rng,
    )
}

/// Grows a tree on the (possibly repeated) row indices `rows`.
pub(crate) fn grow<R: Rng>(
    x: ArrayView2<f64>,
    labels: &[usize],
    n_classes: usize,
    rows: Vec<usize>,
    features_per_split: usize,
    min_split: usize,
    rng: &mut R,
) -> Result<DecisionTree, MlError> {
    let d = x.ncols();
    if features_per_split == 0 || features_per_split > d {
        return Err(MlError::Param(format!(
            "features_per_split must be in 1..={d}"
        )));
    }
    if rows.is_empty() {
        return Err(MlError::Empty);
    }
    if let Some(&label) = labels.iter().find(|&&l| l >= n_classes) {
        return Err(MlError::Label {
            label,
            classes: n_classes,
        });
    }

    let mut nodes = vec![TreeNode::Leaf { counts: Vec::new() }];
    let mut stack = vec![(0usize, rows)];
    let mut order: Vec<usize> = (0..d).collect();
    while let Some((id, rows)) = stack.pop() {
        let counts = histogram(labels, &rows, n_classes);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let split = if pure || rows.len() < min_split {
            None
        } else {
            order.shuffle(rng);
            find_split(x, labels, &rows, &counts, &order, features_per_split)
        };
        match split {
            None => nodes[id] = TreeNode::Leaf { counts },
            Some((feature, threshold)) => {
                let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
                    rows.iter().partition(|&&r| x[[r, feature]] <= threshold);
                debug_assert!(!left_rows.is_empty() && !right_rows.is_empty());
                let left = nodes.len();
                let right = left + 1;
                nodes.push(TreeNode::Leaf { counts: Vec::new() });
                nodes.push(TreeNode::Leaf { counts: Vec::new() });
                nodes[id] = TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                };
                stack.push((right, right_rows));
                stack.push((left, left_rows));
            }
        }
    }
    Ok(DecisionTree { nodes })
}

fn histogram(labels: &[usize], rows: &[usize], n_classes: usize) -> Vec<u32> {
    let mut counts = vec![0u32; n_classes];
    for &r in rows {
        counts[labels[r]] += 1;
    }
    counts
}

fn sum_sq_over_n(counts: &[u32], n: u32) -> f64 {
    let s: f64 = counts.iter().map(|&c| (c as f64) * (c as f64)).sum();
    s / n as f64
}

/// Best `(feature, threshold)` by Gini gain, scanning `order[..subset]`
/// first and falling back to the rest of `order` one feature at a time.
fn find_split(
    x: ArrayView2<f64>,
    labels: &[usize],
    rows: &[usize],
    parent: &[u32],
    order: &[usize],
    subset: usize,
) -> Option<(usize, f64)> {
    let n = rows.len() as u32;
    let parent_term = sum_sq_over_n(parent, n);
    let mut best: Option<(usize, f64, f64)> = None;
    let mut sorted = rows.to_vec();
    let mut left = vec![0u32; parent.len()];
    let mut right = vec![0u32; parent.len()];

    for (k, &feature) in order.iter().enumerate() {
        if k >= subset && best.is_some() {
            break;
        }
        sorted.sort_by(|&a, &b| x[[a, feature]].total_cmp(&x[[b, feature]]));
        left.iter_mut().for_each(|c| *c = 0);
        right.copy_from_slice(parent);
        for i in 0..sorted.len() - 1 {
            let label = labels[sorted[i]];
            left[label] += 1;
            right[label] -= 1;
            let (lo, hi) = (x[[sorted[i], feature]], x[[sorted[i + 1], feature]]);
            if lo == hi {
                continue;
            }
            let n_left = i as u32 + 1;
            // Weighted child impurity subtracted from the parent's, times n.
            let gain = (sum_sq_over_n(&left, n_left) + sum_sq_over_n(&right, n - n_left)
                - parent_term)
                / n as f64;
            if gain > MIN_GAIN && best.is_none_or(|(_, _, g)| gain > g) {
                let mid = lo + (hi - lo) / 2.0;
                let threshold = if mid < hi { mid } else { lo };
                best = Some((feature, threshold, gain));
            }
        }
    }
    best.map(|(f, t, _)| (f, t))
}

/// Gini impurity `1 - sum p_c^2` of a class histogram.
pub fn gini(counts: &[u32]) -> f64 {
    let n: u32 = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    1.0 - sum_sq_over_n(counts, n) / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};
    use proptest::prelude::*;

    fn accuracy(tree: &DecisionTree, x: &Array2<f64>, labels: &[usize]) -> f64 {
        let hits = x
            .rows()
            .into_iter()
            .zip(labels)
            .filter(|(row, &l)| tree.predict(row.as_slice().unwrap()) == l)
            .count();
        hits as f64 / labels.len() as f64
    }

    #[test]
    fn single_sample_is_a_leaf() {
        let x = array![[0.3, 7.0]];
        let t = train_tree(x.view(), &[1], 2, 2, 2, 0).unwrap();
        assert_eq!(t.nodes, vec![TreeNode::Leaf { counts: vec![0, 1] }]);
        assert_eq!(t.predict(&[5.0, 5.0]), 1);
    }

    #[test]
    fn one_dimensional_two_class() {
        let x = array![[-2.0], [-1.0], [1.0], [2.0]];
        let labels = [0, 0, 1, 1];
        let t = train_tree(x.view(), &labels, 2, 1, 2, 0).unwrap();
        assert_eq!(t.depth(), 1);
        match t.nodes[0] {
            TreeNode::Split { threshold, .. } => assert!(-1.0 < threshold && threshold < 1.0),
            ref other => panic!("expected split, got {other:?}"),
        }
        assert_eq!(accuracy(&t, &x, &labels), 1.0);
    }

    #[test]
    fn pure_input_has_no_splits() {
        let x = array![[1.0, 2.0], [3.0, 4.0], [5.0, 0.0]];
        let t = train_tree(x.view(), &[2, 2, 2], 3, 2, 2, 4).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.predict(&[0.0, 0.0]), 2);
    }

    #[test]
    fn empty_input_rejected() {
        let x = Array2::<f64>::zeros((0, 2));
        assert!(matches!(
            train_tree(x.view(), &[], 2, 1, 2, 0),
            Err(MlError::Empty)
        ));
    }

    #[test]
    fn falls_back_when_sampled_feature_is_useless() {
        // Feature 0 is constant; with one feature per split the tree must
        // still find feature 1.
        let x = array![[1.0, 0.0], [1.0, 1.0], [1.0, 2.0], [1.0, 3.0]];
        let labels = [0, 0, 1, 1];
        for seed in 0..8 {
            let t = train_tree(x.view(), &labels, 2, 1, 2, seed).unwrap();
            assert_eq!(accuracy(&t, &x, &labels), 1.0);
        }
    }

    #[test]
    fn adjacent_float_threshold_still_separates() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let x = array![[a], [b]];
        let t = train_tree(x.view(), &[0, 1], 2, 1, 2, 0).unwrap();
        assert_eq!(t.predict(&[a]), 0);
        assert_eq!(t.predict(&[b]), 1);
    }

    #[test]
    fn gini_values() {
        assert_eq!(gini(&[5, 0]), 0.0);
        assert_eq!(gini(&[2, 2]), 0.5);
        assert!((gini(&[1, 1, 1]) - 2.0 / 3.0).abs() < 1e-15);
    }

    /// Routes every training row and checks leaf histograms and split gains.
    fn check_structure(tree: &DecisionTree, x: &Array2<f64>, labels: &[usize], n_classes: usize) {
        let mut routed: Vec<Vec<usize>> = vec![Vec::new(); tree.nodes.len()];
        let mut stack = vec![(0usize, (0..x.nrows()).collect::<Vec<_>>())];
        while let Some((id, rows)) = stack.pop() {
            routed[id] = rows.clone();
            if let TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } = tree.nodes[id]
            {
                let (l, r): (Vec<usize>, Vec<usize>) =
                    rows.iter().partition(|&&i| x[[i, feature]] <= threshold);
                assert!(!l.is_empty() && !r.is_empty(), "split {id} must be proper");
                let h = |rs: &[usize]| histogram(labels, rs, n_classes);
                let weighted = (gini(&h(&l)) * l.len() as f64 + gini(&h(&r)) * r.len() as f64)
                    / rows.len() as f64;
                assert!(gini(&h(&rows)) - weighted > 0.0, "split {id} has no gain");
                stack.push((left, l));
                stack.push((right, r));
            }
        }
        for (id, node) in tree.nodes.iter().enumerate() {
            if let TreeNode::Leaf { counts } = node {
                assert_eq!(*counts, histogram(labels, &routed[id], n_classes));
            }
        }
    }

    proptest! {
        #[test]
        fn splits_gain_and_leaves_count_rows(
            data in prop::collection::vec((prop::collection::vec(-5i32..5, 3), 0usize..3), 1..40),
            seed in any::<u64>(),
        ) {
            let n = data.len();
            let flat: Vec<f64> = data.iter().flat_map(|(r, _)| r.iter().map(|&v| v as f64)).collect();
            let x = Array2::from_shape_vec((n, 3), flat).unwrap();
            let labels: Vec<usize> = data.iter().map(|(_, l)| *l).collect();
            let t = train_tree(x.view(), &labels, 3, 2, 2, seed).unwrap();
            check_structure(&t, &x, &labels, 3);
        }
    }
}
