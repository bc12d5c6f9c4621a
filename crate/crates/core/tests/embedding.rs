#[path = "support/ml_fixtures.rs"]
mod fixtures;

use fixtures::{best_permutation_accuracy, non_increasing, three_blobs};
use ndarray::Array2;
use netclass::ml::tsne::{joint_affinities, kl_divergence, kl_gradient};
use netclass::ml::{kmeans, tsne, KMeansParams, TsneParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn blobs_survive_embedding() {
    let params = TsneParams {
        perplexity: 15.0,
        ..TsneParams::default()
    };
    let mut good = 0;
    for seed in 0..5 {
        let (x, ids) = three_blobs(30, 5, 20.0, 100 + seed);
        let e = tsne(x.view(), &params, seed).unwrap();
        let c = kmeans(e.coords.view(), &KMeansParams::new(3), seed).unwrap();
        assert!(non_increasing(&c.inertia_trace));
        if best_permutation_accuracy(&c.assignments, &ids, 3) >= 0.95 {
            good += 1;
        }
    }
    assert!(good >= 4, "{good} of 5 seeds recovered the blobs");
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = Array2::from_shape_fn((10, 4), |_| rng.random_range(-3.0..3.0));
    let (p, _) = joint_affinities(x.view(), 3.0);
    let y = Array2::from_shape_fn((10, 2), |_| rng.random_range(-1.0..1.0));
    let g = kl_gradient(p.view(), y.view());
    let h = 1e-6;
    let mut num = Array2::zeros((10, 2));
    for i in 0..10 {
        for c in 0..2 {
            let mut plus = y.clone();
            plus[[i, c]] += h;
            let mut minus = y.clone();
            minus[[i, c]] -= h;
            num[[i, c]] = (kl_divergence(p.view(), plus.view())
                - kl_divergence(p.view(), minus.view()))
                / (2.0 * h);
        }
    }
    let diff = (&g - &num).mapv(|v| v * v).sum().sqrt();
    let scale = g.mapv(|v| v * v).sum().sqrt();
    assert!(diff / scale < 1e-4, "relative error {}", diff / scale);
}

#[test]
fn kmeans_trace_never_rises_on_blobs() {
    for seed in 0..20 {
        let (x, _) = three_blobs(20, 3, 4.0, seed);
        for k in 1..7 {
            let r = kmeans(x.view(), &KMeansParams::new(k), seed).unwrap();
            assert!(
                non_increasing(&r.inertia_trace),
                "seed {seed} k {k}: {:?}",
                r.inertia_trace
            );
        }
    }
}
