//! Network autocorrelation statistics for node-valued data on undirected
//! graphs, with permutation and configuration-model inference.

pub mod data;
pub mod error;
pub mod graph;
pub mod inference;
pub mod io;
pub mod report;
pub mod stats;
pub mod synth;
pub mod weights;

pub use data::NodeData;
pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder};
pub use inference::{NullKind, NullResult, NullSpec, Tail};
pub use weights::{DistanceClasses, WeightKind, WeightMatrix};
