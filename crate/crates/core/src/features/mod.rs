//! The fifteen structural features computed for every graph.

mod assortativity;
mod clique;
mod coloring;
mod cores;
mod csv_io;
#[cfg(test)]
mod fixtures;
mod triangles;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

pub use assortativity::assortativity;
pub use clique::{clique_lower_bound, greedy_clique};
pub use coloring::{greedy_chromatic, greedy_coloring};
pub use cores::{core_decomposition, degeneracy_order, CoreDecomposition};
pub use csv_io::{read_feature_csv, write_feature_csv, FeatureRow, FEATURE_CSV_HEADER};
pub use triangles::{
    avg_local_clustering, global_clustering, triangle_counts, wedge_count, TriangleCounts,
};

/// Number of features in a [`FeatureVector`].
pub const FEATURE_COUNT: usize = 15;

/// Column names, in CSV and matrix order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "nodes",
    "edges",
    "density",
    "max_degree",
    "min_degree",
    "avg_degree",
    "assortativity",
    "total_triangles",
    "avg_triangles",
    "max_triangles",
    "avg_clustering_coeff",
    "frac_closed_triangles",
    "max_kcore",
    "max_clique_lb",
    "chromatic_number",
];

/// Columns holding counts. These are heavy-tailed across corpora and get a
/// `log10(1 + x)` transform before standardization.
pub const COUNT_COLUMNS: [bool; FEATURE_COUNT] = [
    true, true, false, true, true, false, false, true, false, true, false, false, true, true, true,
];

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("cannot extract features from a graph with no nodes")]
    EmptyGraph,
    #[error("feature csv header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("feature csv line {line}: {message}")]
    Row { line: u64, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Structural summary of one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub nodes: u64,
    pub edges: u64,
    pub density: f64,
    pub max_degree: u64,
    pub min_degree: u64,
    pub avg_degree: f64,
    pub assortativity: f64,
    pub total_triangles: u64,
    /// Mean per-node triangle participation, `3 * total_triangles / nodes`.
    pub avg_triangles: f64,
    /// Largest per-node triangle participation.
    pub max_triangles: u64,
    pub avg_clustering_coeff: f64,
    pub frac_closed_triangles: f64,
    pub max_kcore: u64,
    pub max_clique_lb: u64,
    /// Colors used by smallest-last greedy coloring (an upper bound).
    pub chromatic_number: u64,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.nodes as f64,
            self.edges as f64,
            self.density,
            self.max_degree as f64,
            self.min_degree as f64,
            self.avg_degree,
            self.assortativity,
            self.total_triangles as f64,
            self.avg_triangles,
            self.max_triangles as f64,
            self.avg_clustering_coeff,
            self.frac_closed_triangles,
            self.max_kcore as f64,
            self.max_clique_lb as f64,
            self.chromatic_number as f64,
        ]
    }
}

/// Computes all fifteen features. Deterministic for a given graph.
pub fn extract_features(g: &Graph) -> Result<FeatureVector, FeatureError> {
    let n = g.node_count();
    if n == 0 {
        return Err(FeatureError::EmptyGraph);
    }
    let m = g.edge_count();
    let degrees = g.degrees();
    let tri = triangle_counts(g);

    let density = if n < 2 {
        0.0
    } else {
        2.0 * m as f64 / (n as f64 * (n as f64 - 1.0))
    };

    Ok(FeatureVector {
        nodes: n as u64,
        edges: m as u64,
        density,
        max_degree: degrees.iter().copied().max().unwrap_or(0) as u64,
        min_degree: degrees.iter().copied().min().unwrap_or(0) as u64,
        avg_degree: 2.0 * m as f64 / n as f64,
        assortativity: assortativity(g),
        total_triangles: tri.total,
        avg_triangles: 3.0 * tri.total as f64 / n as f64,
        max_triangles: tri.per_node.iter().copied().max().unwrap_or(0),
        avg_clustering_coeff: triangles::mean_local_clustering(g, &tri),
        frac_closed_triangles: triangles::transitivity(g, &tri),
        max_kcore: core_decomposition(g).max_core() as u64,
        max_clique_lb: clique_lower_bound(g) as u64,
        chromatic_number: greedy_chromatic(g) as u64,
    })
}

/// Extracts features for many graphs in parallel; output order matches input.
pub fn extract_many(graphs: &[Graph]) -> Vec<Result<FeatureVector, FeatureError>> {
    graphs.par_iter().map(extract_features).collect()
}
