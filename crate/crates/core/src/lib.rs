//! Reconfiguration of balanced connected k-partitions under recombination.
//!
//! A recombination merges two districts of a connected partition and splits
//! their union into two new connected districts. This crate provides:
//!
//! - [`graph`]: graphs, vertex sets, spanning trees, block-cut decomposition
//! - [`partition`]: partitions, slack bounds, move validation and enumeration
//! - [`unbounded`]: at most `6(k-1)` moves between any two connected partitions
//! - [`hamiltonian`]: canonicalization along a Hamilton cycle when `s >= n/k`
//! - [`oracle`]: exhaustive configuration spaces for small graphs
//! - [`generate`]: graph families and the disconnected-space instances
//! - [`ncl`]: constraint-logic instances compiled into recombination instances
//! - [`format`]: text file formats and DOT export

pub mod format;
pub mod generate;
pub mod graph;
pub mod hamiltonian;
pub mod ncl;
pub mod oracle;
pub mod partition;
pub mod unbounded;
mod unionfind;

pub use graph::{Graph, GraphError, Tree, Vertex, VertexSet};
pub use partition::{
    apply_move, canonical_key, enumerate_moves, validate, MoveError, Partition, PartitionKey, RecombMove,
    SlackBound, ValidationReport,
};
