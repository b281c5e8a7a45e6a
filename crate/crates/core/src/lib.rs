//! Incremental maintenance of all dense subgraphs of bounded cardinality in
//! a weighted graph under a stream of edge-weight updates.

pub mod density;
pub mod engine;
pub mod error;
pub mod format;
pub mod graph;
pub mod index;
pub mod ingest;
pub mod oracle;
pub mod rerank;
pub mod runner;
pub mod workload;

pub type Vertex = u32;

pub use density::{DensityConfig, DensityFamily};
pub use engine::{DensityEvent, Engine, EngineOptions, EventKind};
pub use error::{Error, Result};
pub use graph::{EdgeUpdate, WeightedGraph};
