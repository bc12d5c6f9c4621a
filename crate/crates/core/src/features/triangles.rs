use crate::graph::Graph;

/// Per-node triangle participation plus the graph total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleCounts {
    pub per_node: Vec<u64>,
    pub total: u64,
}

/// Counts triangles by orienting each edge from lower to higher
/// `(degree, id)` rank and intersecting the sorted out-lists of both
/// endpoints, so every triangle is found exactly once.
pub fn triangle_counts(g: &Graph) -> TriangleCounts {
    let n = g.node_count();
    let rank_lt = |a: usize, b: usize| (g.degree(a), a) < (g.degree(b), b);
    let out: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            g.neighbors(u)
                .iter()
                .copied()
                .filter(|&v| rank_lt(u, v))
                .collect()
        })
        .collect();

    let mut per_node = vec![0u64; n];
    let mut found = 0u64;
    for u in 0..n {
        for &v in &out[u] {
            let (a, b) = (&out[u], &out[v]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = a[i];
                        per_node[u] += 1;
                        per_node[v] += 1;
                        per_node[w] += 1;
                        found += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    debug_assert_eq!(per_node.iter().sum::<u64>(), 3 * found);
    TriangleCounts {
        per_node,
        total: found,
    }
}

/// Number of paths of length two, `sum_v C(deg(v), 2)`.
pub fn wedge_count(g: &Graph) -> u64 {
    (0..g.node_count())
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum()
}

/// Fraction of closed triangles (transitivity): `3 * triangles / wedges`,
/// zero when the graph has no wedges.
pub fn global_clustering(g: &Graph) -> f64 {
    transitivity(g, &triangle_counts(g))
}

pub(crate) fn transitivity(g: &Graph, counts: &TriangleCounts) -> f64 {
    let wedges = wedge_count(g);
    if wedges == 0 {
        0.0
    } else {
        (3 * counts.total) as f64 / wedges as f64
    }
}

/// Mean local clustering coefficient over all nodes; nodes of degree below
/// two contribute zero.
pub fn avg_local_clustering(g: &Graph) -> f64 {
    mean_local_clustering(g, &triangle_counts(g))
}

pub(crate) fn mean_local_clustering(g: &Graph, counts: &TriangleCounts) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    let sum: f64 = (0..n)
        .map(|v| {
            let d = g.degree(v) as f64;
            if d < 2.0 {
                0.0
            } else {
                2.0 * counts.per_node[v] as f64 / (d * (d - 1.0))
            }
        })
        .sum();
    sum / n as f64
}
