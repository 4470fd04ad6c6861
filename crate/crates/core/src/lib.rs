//! Recommendation-network extension through social-graph shortest paths.
//!
//! The crate covers the whole pipeline: edge-list ingestion, a level-bounded
//! BFS crawler over pluggable friend providers, transition-network
//! extraction between seeders, weighted extended recommendation networks,
//! the structural metric suite and power-law fitting. Seeded generators in
//! [`synth`] provide ground truth for every stage.

pub mod crawler;
pub mod error;
pub mod extend;
pub mod graph;
pub mod metrics;
pub mod paths;
pub mod powerlaw;
pub mod synth;

pub use error::{Error, ProviderError, Result};
pub use graph::{
    components, ingest_directed, ingest_undirected, ComponentDecomposition, DirectedGraph,
    GraphView, NodeTable, SeedSet, UndirectedGraph,
};
