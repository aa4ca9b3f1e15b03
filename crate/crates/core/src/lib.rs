//! Bidirected Dyck-reachability maintained under edge insertions and
//! deletions.
//!
//! The engine keeps the merged graph: the quotient of the input graph by the
//! Dyck-reachability equivalence, with every merged edge weighted by the
//! number of original edges it folds. Deletions that touch cycles of the
//! merged graph explode the cyclic classes and re-solve, since weights alone
//! cannot tell which anchor a class on a cycle depends on.

pub mod dynamic;
pub mod error;
pub mod graph;
pub mod merged;
pub mod oracle;
pub mod partition;
pub mod scc;
pub mod solver_static;
pub mod updates;

pub use dynamic::{track_cycles, CycleMode, CycleSet, DeletionPath, DeletionReport, Engine, Strategy};
pub use error::{Error, Result};
pub use graph::{parse_graph, serialize_graph, EdgeRef, InputGraph, Kind, Label, NodeId, Polarity};
pub use merged::{Group, MergeOutcome, MergedEdge, MergedGraph};
pub use oracle::{cfl_closure, rebuild_partition, reach_matrix, ReachMatrix};
pub use partition::{format_fingerprint, DisjointSets, Fingerprint};
pub use solver_static::{opt_dyck, restore_fixpoint};
pub use updates::{parse_updates, serialize_updates, UpdateOp};
