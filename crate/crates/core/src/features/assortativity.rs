use crate::graph::Graph;

/// Degree assortativity: Pearson correlation of endpoint degrees over both
/// orientations of every edge.
///
/// Returns 0 when the degree variance over edge endpoints vanishes, which
/// covers edgeless and regular graphs.
pub fn assortativity(g: &Graph) -> f64 {
    let stubs = 2 * g.edge_count();
    if stubs == 0 {
        return 0.0;
    }
    let deg = g.degrees();
    // Each node appears deg(v) times as an endpoint.
    let sum_sq: f64 = deg.iter().map(|&d| (d * d) as f64).sum();
    let mean = sum_sq / stubs as f64;

    let variance: f64 = deg
        .iter()
        .map(|&d| d as f64 * (d as f64 - mean).powi(2))
        .sum::<f64>();
    if variance == 0.0 {
        return 0.0;
    }
    let covariance: f64 = g
        .edges()
        .map(|(u, v)| 2.0 * (deg[u] as f64 - mean) * (deg[v] as f64 - mean))
        .sum();
    (covariance / variance).clamp(-1.0, 1.0)
}
