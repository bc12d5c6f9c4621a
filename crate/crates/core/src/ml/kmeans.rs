use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::Rng;
use rayon::prelude::*;

use super::MlError;
use crate::rng::{derive_seed, seeded, stream};

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansParams {
    pub k: usize,
    pub max_iter: usize,
    pub restarts: usize,
}

impl KMeansParams {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            max_iter: 300,
            restarts: 10,
        }
    }
}

/// Output of [`kmeans`] for the best restart.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterResult {
    /// `k x D` centroids.
    pub centroids: Array2<f64>,
    pub assignments: Vec<usize>,
    /// Sum of squared distances of rows to their assigned centroid.
    pub inertia: f64,
    /// Inertia after each assignment step of the winning restart.
    pub inertia_trace: Vec<f64>,
    pub restart: usize,
}

impl ClusterResult {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.centroids.nrows()];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }
}

/// k-means with k-means++ seeding and Lloyd iterations, best of `restarts`.
///
/// Restart `r` is seeded with `derive_seed(seed, KMEANS, r)`; restarts run in
/// parallel and the lowest inertia wins (lowest restart index on ties).
pub fn kmeans(
    x: ArrayView2<f64>,
    params: &KMeansParams,
    seed: u64,
) -> Result<ClusterResult, MlError> {
    let n = x.nrows();
    if params.k == 0 || params.k > n {
        return Err(MlError::Param(format!("k = {} outside 1..={n}", params.k)));
    }
    if params.restarts == 0 {
        return Err(MlError::Param("restarts must be at least 1".into()));
    }
    if let Some(((row, col), _)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(MlError::NonFinite { row, col });
    }
    let runs: Vec<ClusterResult> = (0..params.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded(derive_seed(seed, stream::KMEANS, r as u64));
            let init = plus_plus_init(x, params.k, &mut rng);
            let mut run = lloyd(x, init, params.max_iter);
            run.restart = r;
            run
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, run| {
            if run.inertia < best.inertia {
                run
            } else {
                best
            }
        })
        .expect("at least one restart");
    Ok(best)
}

fn sq_dist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// k-means++ seeding: first centroid uniform, then each next one drawn with
/// probability proportional to squared distance to the nearest chosen one.
fn plus_plus_init<R: Rng>(x: ArrayView2<f64>, k: usize, rng: &mut R) -> Array2<f64> {
    let n = x.nrows();
    let mut centroids = Array2::zeros((k, x.ncols()));
    let first = rng.random_range(0..n);
    centroids.row_mut(0).assign(&x.row(first));
    let mut nearest: Vec<f64> = (0..n).map(|i| sq_dist(x.row(i), x.row(first))).collect();
    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &d) in nearest.iter().enumerate() {
                acc += d;
                if acc > target && d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            // Rounding can leave `chosen` on a zero-weight tail row.
            if nearest[chosen] == 0.0 {
                chosen = nearest
                    .iter()
                    .rposition(|&d| d > 0.0)
                    .expect("positive total");
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centroids.row_mut(c).assign(&x.row(pick));
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sq_dist(x.row(i), x.row(pick)));
        }
    }
    centroids
}

fn assign(x: ArrayView2<f64>, centroids: &Array2<f64>) -> (Vec<usize>, Vec<f64>) {
    let mut labels = Vec::with_capacity(x.nrows());
    let mut dists = Vec::with_capacity(x.nrows());
    for row in x.rows() {
        let mut best = (0, f64::INFINITY);
        for (c, centroid) in centroids.rows().into_iter().enumerate() {
            let d = sq_dist(row, centroid);
            if d < best.1 {
                best = (c, d);
            }
        }
        labels.push(best.0);
        dists.push(best.1);
    }
    (labels, dists)
}

/// Lloyd iterations from `centroids` until the assignment stops changing or
/// `max_iter` update steps have run. An empty cluster is moved onto the row
/// farthest from its own centroid.
pub(crate) fn lloyd(
    x: ArrayView2<f64>,
    mut centroids: Array2<f64>,
    max_iter: usize,
) -> ClusterResult {
    let (n, k) = (x.nrows(), centroids.nrows());
    let mut trace = Vec::new();
    let mut previous: Option<Vec<usize>> = None;
    let mut updates = 0;
    loop {
        let (labels, dists) = assign(x, &centroids);
        let inertia: f64 = dists.iter().sum();
        trace.push(inertia);
        if previous.as_ref() == Some(&labels) || updates == max_iter {
            return ClusterResult {
                centroids,
                assignments: labels,
                inertia,
                inertia_trace: trace,
                restart: 0,
            };
        }

        let mut sums = Array2::<f64>::zeros(centroids.dim());
        let mut sizes = vec![0usize; k];
        for (i, &c) in labels.iter().enumerate() {
            sizes[c] += 1;
            let mut s = sums.row_mut(c);
            s += &x.row(i);
        }
        for (c, &size) in sizes.iter().enumerate().filter(|&(_, &s)| s > 0) {
            let mean = &sums.row(c) / size as f64;
            centroids.row_mut(c).assign(&mean);
        }
        let mut taken = vec![false; n];
        for c in (0..k).filter(|&c| sizes[c] == 0) {
            let far = (0..n)
                .filter(|&i| !taken[i])
                .map(|i| (i, sq_dist(x.row(i), centroids.row(labels[i]))))
                .fold(None, |best: Option<(usize, f64)>, (i, d)| match best {
                    Some((_, bd)) if bd >= d => best,
                    _ => Some((i, d)),
                });
            if let Some((i, _)) = far {
                taken[i] = true;
                let row = x.row(i).to_owned();
                centroids.row_mut(c).assign(&row);
            }
        }
        previous = Some(labels);
        updates += 1;
    }
}
