//! Exact t-SNE.
//!
//! Input affinities use a Gaussian kernel per row whose precision is found
//! by bisection so the row's conditional distribution has perplexity
//! `2^H`. The embedding minimizes `KL(P || Q)` with Student-t output
//! affinities by gradient descent with momentum, per-coordinate adaptive
//! gains and early exaggeration. Everything is `O(N^2)` and single-threaded.

use ndarray::{Array2, ArrayView2, Axis};
use rand::Rng;
use rand_distr::StandardNormal;

use super::MlError;
use crate::rng::seeded;

/// Maximum bisection steps per row.
const MAX_BISECTION_STEPS: usize = 200;
/// Entropy tolerance (bits) for the per-row bandwidth search.
pub const ENTROPY_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct TsneParams {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub exaggeration: f64,
    /// Iterations run with exaggerated affinities and the initial momentum.
    pub exaggeration_iters: usize,
    pub initial_momentum: f64,
    pub final_momentum: f64,
    /// Standard deviation of the Gaussian initial layout.
    pub init_scale: f64,
}

impl Default for TsneParams {
    fn default() -> Self {
        Self {
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            exaggeration: 12.0,
            exaggeration_iters: 250,
            initial_momentum: 0.5,
            final_momentum: 0.8,
            init_scale: 1e-4,
        }
    }
}

impl TsneParams {
    /// Checks parameters against a data set of `n` rows.
    pub fn validate(&self, n: usize) -> Result<(), MlError> {
        if n < 4 {
            return Err(MlError::Param(format!(
                "t-SNE needs at least 4 rows, got {n}"
            )));
        }
        let limit = (n as f64 - 1.0) / 3.0;
        if !(self.perplexity > 0.0 && self.perplexity < limit) {
            return Err(MlError::Param(format!(
                "perplexity {} must be in (0, {limit:.4}) for {n} rows",
                self.perplexity
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(MlError::Param("learning_rate must be positive".into()));
        }
        if self.exaggeration.is_nan() || self.exaggeration < 1.0 {
            return Err(MlError::Param("exaggeration must be at least 1".into()));
        }
        Ok(())
    }
}

/// Two-dimensional embedding plus objective values.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    /// `N x 2` coordinates.
    pub coords: Array2<f64>,
    /// Final `KL(P || Q)`.
    pub kl: f64,
    /// `KL(P || Q)` (unexaggerated `P`) when early exaggeration ended.
    pub kl_after_exaggeration: f64,
}

/// Squared Euclidean distances between all rows.
pub fn squared_distances(x: ArrayView2<f64>) -> Array2<f64> {
    let n = x.nrows();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = x
                .row(i)
                .iter()
                .zip(x.row(j).iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            d[[i, j]] = v;
            d[[j, i]] = v;
        }
    }
    d
}

/// Row-conditional affinities `p(j|i)` and each row's achieved entropy in
/// bits, with bandwidths chosen so the entropy is `log2(perplexity)`.
pub fn conditional_affinities(dist: ArrayView2<f64>, perplexity: f64) -> (Array2<f64>, Vec<f64>) {
    let n = dist.nrows();
    let target = perplexity.log2();
    let mut p = Array2::zeros((n, n));
    let mut entropies = Vec::with_capacity(n);
    let mut row = vec![0.0; n];

    for i in 0..n {
        let d_min = (0..n)
            .filter(|&j| j != i)
            .map(|j| dist[[i, j]])
            .fold(f64::INFINITY, f64::min);
        // Distances shifted by the row minimum; the shift cancels on
        // normalization and keeps exp() from underflowing.
        let entropy_at = |beta: f64, row: &mut [f64]| -> f64 {
            let mut sum = 0.0;
            let mut weighted = 0.0;
            for j in 0..n {
                if j == i {
                    row[j] = 0.0;
                    continue;
                }
                let shifted = dist[[i, j]] - d_min;
                let w = (-beta * shifted).exp();
                row[j] = w;
                sum += w;
                weighted += w * shifted;
            }
            for w in row.iter_mut() {
                *w /= sum;
            }
            (sum.ln() + beta * weighted / sum) / std::f64::consts::LN_2
        };

        let scale = (0..n)
            .filter(|&j| j != i)
            .map(|j| dist[[i, j]] - d_min)
            .sum::<f64>()
            / (n - 1) as f64;
        let mut beta = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        let (mut lo, mut hi) = (0.0, f64::INFINITY);
        let mut h = entropy_at(beta, &mut row);
        for _ in 0..MAX_BISECTION_STEPS {
            let diff = h - target;
            if diff.abs() < ENTROPY_TOLERANCE {
                break;
            }
            if diff > 0.0 {
                lo = beta;
                beta = if hi.is_infinite() {
                    beta * 2.0
                } else {
                    0.5 * (beta + hi)
                };
            } else {
                hi = beta;
                beta = 0.5 * (beta + lo);
            }
            h = entropy_at(beta, &mut row);
        }
        p.row_mut(i).assign(&ndarray::aview1(&row));
        entropies.push(h);
    }
    (p, entropies)
}

/// Symmetric joint affinities `(p(j|i) + p(i|j)) / 2N`, plus the per-row
/// entropies of the conditionals.
pub fn joint_affinities(x: ArrayView2<f64>, perplexity: f64) -> (Array2<f64>, Vec<f64>) {
    let n = x.nrows();
    let (cond, entropies) = conditional_affinities(squared_distances(x).view(), perplexity);
    let mut p = &cond + &cond.t();
    p /= 2.0 * n as f64;
    (p, entropies)
}

/// Student-t kernel `1 / (1 + |y_i - y_j|^2)` with a zero diagonal, and its
/// off-diagonal sum.
fn student_kernel(y: ArrayView2<f64>) -> (Array2<f64>, f64) {
    let n = y.nrows();
    let mut num = Array2::zeros((n, n));
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let d: f64 = y
                .row(i)
                .iter()
                .zip(y.row(j).iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let k = 1.0 / (1.0 + d);
            num[[i, j]] = k;
            num[[j, i]] = k;
            total += 2.0 * k;
        }
    }
    (num, total)
}

/// `KL(P || Q)` for embedding `y`; zero entries of `P` contribute nothing.
pub fn kl_divergence(p: ArrayView2<f64>, y: ArrayView2<f64>) -> f64 {
    let (num, total) = student_kernel(y);
    let mut kl = 0.0;
    for ((i, j), &pij) in p.indexed_iter() {
        if i != j && pij > 0.0 {
            kl += pij * (pij / (num[[i, j]] / total)).ln();
        }
    }
    kl
}

/// Gradient of [`kl_divergence`] with respect to `y`:
/// `4 * sum_j (p_ij - q_ij) (y_i - y_j) / (1 + |y_i - y_j|^2)`.
pub fn kl_gradient(p: ArrayView2<f64>, y: ArrayView2<f64>) -> Array2<f64> {
    let (num, total) = student_kernel(y);
    let (n, dims) = y.dim();
    let mut grad = Array2::zeros((n, dims));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let coeff = 4.0 * (p[[i, j]] - num[[i, j]] / total) * num[[i, j]];
            for c in 0..dims {
                grad[[i, c]] += coeff * (y[[i, c]] - y[[j, c]]);
            }
        }
    }
    grad
}

/// Embeds the rows of `x` in two dimensions.
pub fn tsne(x: ArrayView2<f64>, params: &TsneParams, seed: u64) -> Result<Embedding, MlError> {
    let n = x.nrows();
    params.validate(n)?;
    if let Some(((row, col), _)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(MlError::NonFinite { row, col });
    }
    let (p, _) = joint_affinities(x, params.perplexity);
    let exaggerated = &p * params.exaggeration;

    let mut rng = seeded(seed);
    let mut y = Array2::from_shape_fn((n, 2), |_| {
        params.init_scale * rng.sample::<f64, _>(StandardNormal)
    });
    let mut velocity = Array2::<f64>::zeros((n, 2));
    let mut gains = Array2::<f64>::ones((n, 2));
    let mut kl_after_exaggeration = None;

    for it in 0..params.iterations {
        let early = it < params.exaggeration_iters;
        let grad = kl_gradient(if early { exaggerated.view() } else { p.view() }, y.view());
        let momentum = if early {
            params.initial_momentum
        } else {
            params.final_momentum
        };
        for ((g, v), gain) in grad.iter().zip(velocity.iter_mut()).zip(gains.iter_mut()) {
            *gain = if (*g > 0.0) != (*v > 0.0) {
                *gain + 0.2
            } else {
                *gain * 0.8
            };
            *gain = gain.max(0.01);
            *v = momentum * *v - params.learning_rate * *gain * g;
        }
        y += &velocity;
        let mean = y.mean_axis(Axis(0)).expect("non-empty");
        y -= &mean;
        if it + 1 == params.exaggeration_iters {
            kl_after_exaggeration = Some(kl_divergence(p.view(), y.view()));
        }
    }
    let kl = kl_divergence(p.view(), y.view());
    if let Some(((row, col), _)) = y.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(MlError::NonFinite { row, col });
    }
    Ok(Embedding {
        coords: y,
        kl,
        kl_after_exaggeration: kl_after_exaggeration.unwrap_or(kl),
    })
}
