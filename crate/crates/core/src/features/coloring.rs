use super::cores::degeneracy_order;
use crate::graph::Graph;

/// Greedy sequential coloring in smallest-last order (reverse degeneracy
/// order), each node taking the smallest color unused by its colored
/// neighbors. Uses at most `degeneracy + 1` colors.
pub fn greedy_coloring(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut color = vec![usize::MAX; n];
    let mut seen = vec![usize::MAX; n + 1];
    for &v in degeneracy_order(g).iter().rev() {
        for &u in g.neighbors(v) {
            if color[u] != usize::MAX {
                seen[color[u]] = v;
            }
        }
        color[v] = (0..).find(|&c| seen[c] != v).expect("a free color exists");
    }
    color
}

/// Number of colors used by [`greedy_coloring`]; an upper bound on the
/// chromatic number. Zero for the empty graph.
pub fn greedy_chromatic(g: &Graph) -> usize {
    greedy_coloring(g).iter().map(|&c| c + 1).max().unwrap_or(0)
}
