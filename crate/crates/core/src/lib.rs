//! Dependent random choice, greedy goodness-tracking embedders, and the
//! brute-force oracles that check them, over dense bit-row graphs.
//!
//! Every embedder validates its own output before returning it; thresholds
//! and densities are compared in exact rational arithmetic.

pub mod drc;
pub mod embed;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod par;
pub mod ramsey;
pub mod vertex_set;

pub use error::{Error, Result};
pub use exact::Rational;
pub use graph::{
    balanced_max_cut_partition, degeneracy_order, density_between, edge_density,
    validate_embedding, verify_arrangeable, BipartiteGraph, Contract, Embedding, EmbeddingMode,
    Graph, Hypergraph, Side,
};
pub use vertex_set::VertexSet;
