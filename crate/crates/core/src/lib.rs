//! Maximum matching interdiction on planar graphs.

pub mod error;
pub mod graph;
pub mod instance;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, VertexId, WeightedGraph};
pub use instance::{Instance, ProblemKind};
pub mod treewidth;
pub mod tw_interdict;
pub mod ptas;
pub mod reduction;
pub mod generate;
pub mod table;
