//! Canonical simple undirected graphs.
//!
//! Every input is reduced to the same shape: nodes are `0..n`, adjacency lists
//! are sorted and duplicate-free, there are no self-loops and every edge is
//! stored in both endpoint lists. Features downstream rely on all of this.

pub mod classic;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

pub use parse::{parse_edge_list, parse_matrix_market, read_graph_file, GraphFormat};

/// Errors raised while reading graph files.
#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("matrix market: {0}")]
    MatrixMarket(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Simple undirected graph with compact node ids.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph on nodes `0..n` from index pairs.
    ///
    /// Self-loops are dropped and duplicate or reversed pairs are merged.
    ///
    /// # Panics
    ///
    /// If an endpoint is `>= n`.
    pub fn from_index_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut twice_edges = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice_edges += list.len();
        }
        Self {
            adjacency,
            edge_count: twice_edges / 2,
        }
    }

    /// Builds a graph from labelled endpoint pairs, compacting labels to
    /// `0..n` in order of first appearance.
    pub fn from_edges<I, L>(pairs: I) -> (Self, NodeIdMap)
    where
        I: IntoIterator<Item = (L, L)>,
        L: ToString,
    {
        let mut map = NodeIdMap::default();
        let indexed: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (map.intern(a.to_string()), map.intern(b.to_string())))
            .collect();
        (Self::from_index_edges(map.len(), indexed), map)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Each undirected edge once as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    /// Writes the canonical edge list: one `u v` line per edge, `u < v`,
    /// lexicographically sorted.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

/// Source labels of a parsed graph, indexed by compact node id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeIdMap {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeIdMap {
    pub(crate) fn intern(&mut self, label: String) -> usize {
        if let Some(&id) = self.index.get(&label) {
            return id;
        }
        let id = self.labels.len();
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        id
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn id(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.node_count(), self.edge_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_canonical(g: &Graph) {
        let mut total = 0;
        for v in 0..g.node_count() {
            let list = g.neighbors(v);
            assert!(!list.contains(&v));
            assert!(list.windows(2).all(|w| w[0] < w[1]));
            for &u in list {
                assert!(g.has_edge(u, v));
            }
            total += list.len();
        }
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn path_from_edges() {
        let (g, _) = Graph::from_edges([(0, 1), (1, 2)]);
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        assert_canonical(&g);
    }

    #[test]
    fn duplicates_and_self_loops_merge() {
        let (g, _) = Graph::from_edges([(1, 2), (2, 1), (1, 1)]);
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_canonical(&g);
    }

    #[test]
    fn labels_are_compacted_in_first_appearance_order() {
        let (g, map) = Graph::from_edges([(5, 7)]);
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_eq!(map.id("5"), Some(0));
        assert_eq!(map.id("7"), Some(1));
        assert_eq!(map.label(1), "7");
    }

    #[test]
    fn empty_input_gives_empty_graph() {
        let (g, map) = Graph::from_edges(Vec::<(u32, u32)>::new());
        assert!(g.is_empty());
        assert!(map.is_empty());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn degrees_of_small_graphs() {
        let (p3, _) = Graph::from_edges([(0, 1), (1, 2)]);
        assert_eq!(p3.degrees(), vec![1, 2, 1]);
        let k4 = Graph::from_index_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(k4.degrees(), vec![3, 3, 3, 3]);
        assert_eq!(Graph::empty(2).degrees(), vec![0, 0]);
    }

    #[test]
    fn canonical_writer_sorts_pairs() {
        let g = Graph::from_index_edges(4, [(3, 1), (2, 0), (1, 0)]);
        assert_eq!(g.to_edge_list_string(), "0 1\n0 2\n1 3\n");
    }

    #[test]
    fn from_edges_reproduces_edge_set() {
        let g = Graph::from_index_edges(5, [(0, 4), (1, 2), (2, 3), (3, 4), (0, 2)]);
        let rebuilt = Graph::from_index_edges(g.node_count(), g.edges());
        assert_eq!(rebuilt, g);
    }
}
