pub use crate::graph::classic::{complete, complete_bipartite, cycle, karate_club, path, star};
use crate::graph::Graph;

/// Two triangles sharing node 2.
pub fn bowtie() -> Graph {
    Graph::from_index_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
}

/// `K4` on nodes 0..4 with pendant node 4 attached to node 0.
pub fn k4_pendant() -> Graph {
    Graph::from_index_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)])
}
