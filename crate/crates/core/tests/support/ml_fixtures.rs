//! Data sets and scoring helpers shared by the learning tests.

#![allow(dead_code)]

use ndarray::{Array2, ArrayView2};
use netclass::extract_features;
use netclass::features::FeatureRow;
use netclass::ml::Dataset;
use netclass::synth::{barabasi_albert, erdos_renyi};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// `per_blob` points around each of three centers in `dim` dimensions with
/// unit standard deviation. Centers are 0, `sep * e0` and `sep * e1`, so
/// every pair is at least `sep` apart. Returns points and blob ids.
pub fn three_blobs(per_blob: usize, dim: usize, sep: f64, seed: u64) -> (Array2<f64>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Array2::zeros((3 * per_blob, dim));
    let mut ids = Vec::with_capacity(3 * per_blob);
    for b in 0..3 {
        for i in 0..per_blob {
            let row = b * per_blob + i;
            for j in 0..dim {
                let center = if b > 0 && j == b - 1 { sep } else { 0.0 };
                x[[row, j]] = center + rng.sample::<f64, _>(StandardNormal);
            }
            ids.push(b);
        }
    }
    (x, ids)
}

/// Fraction of rows whose cluster maps to their class under the best
/// one-to-one relabeling of `k` clusters.
pub fn best_permutation_accuracy(clusters: &[usize], classes: &[usize], k: usize) -> f64 {
    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    permutations(k)
        .into_iter()
        .map(|perm| {
            clusters
                .iter()
                .zip(classes)
                .filter(|&(&c, &t)| perm[c] == t)
                .count()
        })
        .max()
        .unwrap() as f64
        / clusters.len() as f64
}

/// Non-increase of an inertia trace, allowing only last-bit rounding.
pub fn non_increasing(trace: &[f64]) -> bool {
    trace
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-12)
}

/// Balanced four-class graph corpus: sparse and dense BA, sparse and dense
/// ER, `per_class` graphs each with 100 to 400 nodes.
pub fn four_family_rows(per_class: usize, seed: u64) -> Vec<FeatureRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for class in 0..4 {
        for i in 0..per_class {
            let n = rng.random_range(100..=400);
            let s = rng.random::<u64>();
            let (name, g) = match class {
                0 => ("ba_sparse", barabasi_albert(n, 2, s).unwrap()),
                1 => ("ba_dense", barabasi_albert(n, 6, s).unwrap()),
                2 => (
                    "er_sparse",
                    erdos_renyi(n, 4.0 / (n - 1) as f64, s).unwrap(),
                ),
                _ => (
                    "er_dense",
                    erdos_renyi(n, 12.0 / (n - 1) as f64, s).unwrap(),
                ),
            };
            rows.push(FeatureRow {
                name: format!("{name}_{i}"),
                category: Some(name.to_string()),
                features: extract_features(&g).unwrap(),
            });
        }
    }
    rows
}

/// Same rows with categories permuted uniformly at random.
pub fn shuffle_labels(d: &Dataset, seed: u64) -> Dataset {
    let mut labels = d.labels.clone();
    labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Dataset {
        labels,
        ..d.clone()
    }
}

/// Gaussian features with `k` classes of `per_class` rows, no signal.
pub fn noise_dataset(k: usize, per_class: usize, dim: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = k * per_class;
    let x = Array2::from_shape_fn((n, dim), |_| rng.sample::<f64, _>(StandardNormal));
    Dataset::new(
        (0..n).map(|i| format!("r{i}")).collect(),
        (0..n).map(|i| i / per_class).collect(),
        (0..k).map(|c| format!("c{c}")).collect(),
        x,
        vec![false; dim],
    )
    .unwrap()
}

pub fn unique_rows(x: ArrayView2<f64>) -> bool {
    let mut rows: Vec<Vec<u64>> = x
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|v| v.to_bits()).collect())
        .collect();
    rows.sort();
    rows.windows(2).all(|w| w[0] != w[1])
}
