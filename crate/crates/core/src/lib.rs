//! Structural network classification.
//!
//! Graphs are parsed into a canonical simple undirected form ([`graph`]),
//! summarized by fifteen structural features ([`features`]) and classified
//! into categories with a random forest ([`ml`]). [`synth`] produces
//! Erdős–Rényi and Barabási–Albert corpora, and [`eval`] holds
//! cross-validation and the reports built on top of it.

pub mod eval;
pub mod features;
pub mod graph;
pub mod ml;
pub mod numfmt;
pub mod rng;
pub mod synth;

pub use features::{extract_features, FeatureVector};
pub use graph::{Graph, NodeIdMap};
