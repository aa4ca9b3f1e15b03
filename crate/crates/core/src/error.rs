use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {src} -({kind}-> {dst} already present")]
    DuplicateEdge { src: NodeId, kind: u32, dst: NodeId },
    #[error("edge {src} -({kind}-> {dst} not present")]
    MissingEdge { src: NodeId, kind: u32, dst: NodeId },
    #[error("node {node} out of range (node count {node_count})")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("label kind {kind} outside alphabet 1..={alphabet}")]
    InvalidLabel { kind: u32, alphabet: u32 },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("node {0} is not a class representative")]
    NotARepresentative(NodeId),
    #[error("cannot merge representative {0} with itself")]
    SameRepresentative(NodeId),
    #[error("graph has {node_count} nodes, oracle bound is {bound}")]
    GraphTooLarge { node_count: usize, bound: usize },
    #[error("closure relation is not an equivalence: {0}")]
    NotEquivalence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
