//! H-partitions of bounded-treewidth quotients, ordered partitions for weak
//! coloring numbers, and the tree-decomposition and minor machinery they are
//! built from.
//!
//! Everything works on small graphs (at most [`bitset::MAX_VERTICES`]
//! vertices) with exact, exponential-time kernels. Every construction returns
//! data that an independent checker in this crate can re-verify.

pub mod bitset;
pub mod construct;
pub mod decomp;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod minors;
pub mod partitions;
pub mod sweep;
pub mod wcol;

pub use bitset::{VertexSet, MAX_VERTICES};
pub use error::{Error, Result};
pub use graph::{Graph, Path};
