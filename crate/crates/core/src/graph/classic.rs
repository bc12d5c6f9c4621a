//! Small named graphs used as fixtures and sanity checks.

use super::Graph;

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Graph {
    Graph::from_index_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Path on `n` nodes, `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_index_edges(n, (1..n).map(|v| (v - 1, v)))
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 nodes");
    Graph::from_index_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_index_edges(leaves + 1, (1..=leaves).map(|v| (0, v)))
}

/// Complete bipartite graph with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_index_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
}

#[rustfmt::skip]
const KARATE_EDGES: [(usize, usize); 78] = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10), (0, 11),
    (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31), (1, 2), (1, 3), (1, 7), (1, 13),
    (1, 17), (1, 19), (1, 21), (1, 30), (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27),
    (2, 28), (2, 32), (3, 7), (3, 12), (3, 13), (4, 6), (4, 10), (5, 6), (5, 10), (5, 16),
    (6, 16), (8, 30), (8, 32), (8, 33), (9, 33), (13, 33), (14, 32), (14, 33), (15, 32), (15, 33),
    (18, 32), (18, 33), (19, 33), (20, 32), (20, 33), (22, 32), (22, 33), (23, 25), (23, 27), (23, 29),
    (23, 32), (23, 33), (24, 25), (24, 27), (24, 31), (25, 31), (26, 29), (26, 33), (27, 33), (28, 31),
    (28, 33), (29, 32), (29, 33), (30, 32), (30, 33), (31, 32), (31, 33), (32, 33),
];

/// Zachary's karate club network (34 members, 78 ties).
pub fn karate_club() -> Graph {
    Graph::from_index_edges(34, KARATE_EDGES)
}
