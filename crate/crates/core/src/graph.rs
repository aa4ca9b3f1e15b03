//! The input bidirected graph.
//!
//! Every open edge `u -(i-> v` has an implicit close counterpart `v -)i-> u`.
//! Only the open form is stored; close-polarity spellings are canonicalized on
//! the way in, so incidence queries with either polarity answer from the same
//! edge set.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Parenthesis index `i` of `(i` / `)i`. Always `>= 1`.
pub type Kind = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Open,
    Close,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub kind: Kind,
    pub polarity: Polarity,
}

impl Label {
    pub fn open(kind: Kind) -> Self {
        Label { kind, polarity: Polarity::Open }
    }

    pub fn close(kind: Kind) -> Self {
        Label { kind, polarity: Polarity::Close }
    }
}

/// An edge in canonical open form: `src -(kind-> dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub src: NodeId,
    pub kind: Kind,
    pub dst: NodeId,
}

impl EdgeRef {
    pub fn new(src: NodeId, kind: Kind, dst: NodeId) -> Self {
        EdgeRef { src, kind, dst }
    }

    /// Canonical form of `u -label-> v`.
    pub fn canonical(u: NodeId, label: Label, v: NodeId) -> Self {
        match label.polarity {
            Polarity::Open => EdgeRef::new(u, label.kind, v),
            Polarity::Close => EdgeRef::new(v, label.kind, u),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InputGraph {
    node_count: usize,
    /// Declared alphabet size; `None` means unbounded.
    alphabet: Option<Kind>,
    /// Per node: `(kind, dst)` of its open out-edges.
    out: Vec<BTreeSet<(Kind, NodeId)>>,
    /// Per node: `(kind, src)` of open edges entering it.
    inc: Vec<BTreeSet<(Kind, NodeId)>>,
    edge_count: usize,
}

impl InputGraph {
    pub fn new(node_count: usize) -> Self {
        InputGraph {
            node_count,
            alphabet: None,
            out: vec![BTreeSet::new(); node_count],
            inc: vec![BTreeSet::new(); node_count],
            edge_count: 0,
        }
    }

    pub fn with_alphabet(node_count: usize, alphabet: Kind) -> Self {
        InputGraph { alphabet: Some(alphabet), ..InputGraph::new(node_count) }
    }

    pub fn from_edges(node_count: usize, edges: &[(NodeId, Kind, NodeId)]) -> Result<Self> {
        let mut g = InputGraph::new(node_count);
        for &(u, k, v) in edges {
            g.add_edge(u, Label::open(k), v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn alphabet(&self) -> Option<Kind> {
        self.alphabet
    }

    /// Largest kind used by any edge, 0 when there are none.
    pub fn max_kind(&self) -> Kind {
        self.edges().map(|e| e.kind).max().unwrap_or(0)
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node, node_count: self.node_count })
        }
    }

    fn check_kind(&self, kind: Kind) -> Result<()> {
        let alphabet = self.alphabet.unwrap_or(Kind::MAX);
        if kind == 0 || kind > alphabet {
            return Err(Error::InvalidLabel { kind, alphabet });
        }
        Ok(())
    }

    fn check_edge(&self, u: NodeId, label: Label, v: NodeId) -> Result<EdgeRef> {
        self.check_node(u)?;
        self.check_node(v)?;
        self.check_kind(label.kind)?;
        Ok(EdgeRef::canonical(u, label, v))
    }

    pub fn add_edge(&mut self, u: NodeId, label: Label, v: NodeId) -> Result<EdgeRef> {
        let e = self.check_edge(u, label, v)?;
        if !self.out[e.src].insert((e.kind, e.dst)) {
            return Err(Error::DuplicateEdge { src: e.src, kind: e.kind, dst: e.dst });
        }
        self.inc[e.dst].insert((e.kind, e.src));
        self.edge_count += 1;
        Ok(e)
    }

    pub fn remove_edge(&mut self, u: NodeId, label: Label, v: NodeId) -> Result<EdgeRef> {
        let e = self.check_edge(u, label, v)?;
        if !self.out[e.src].remove(&(e.kind, e.dst)) {
            return Err(Error::MissingEdge { src: e.src, kind: e.kind, dst: e.dst });
        }
        self.inc[e.dst].remove(&(e.kind, e.src));
        self.edge_count -= 1;
        Ok(e)
    }

    /// Whether `u -label-> v` exists under either polarity spelling.
    pub fn has_edge(&self, u: NodeId, label: Label, v: NodeId) -> bool {
        let e = EdgeRef::canonical(u, label, v);
        e.src < self.node_count && self.out[e.src].contains(&(e.kind, e.dst))
    }

    pub fn out_edges(&self, node: NodeId) -> impl Iterator<Item = (Kind, NodeId)> + '_ {
        self.out[node].iter().copied()
    }

    pub fn in_edges(&self, node: NodeId) -> impl Iterator<Item = (Kind, NodeId)> + '_ {
        self.inc[node].iter().copied()
    }

    /// All edges in ascending `(src, kind, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(src, set)| set.iter().map(move |&(kind, dst)| EdgeRef::new(src, kind, dst)))
    }
}

pub fn parse_graph(text: &str) -> Result<InputGraph> {
    let mut graph: Option<InputGraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let syntax = |message: String| Error::Syntax { line: line_no, message };
        match (fields[0], graph.as_mut()) {
            ("nodes", None) => {
                let [_, count] = fields[..] else {
                    return Err(syntax("expected `nodes <count>`".into()));
                };
                graph = Some(InputGraph::new(parse_num(count, line_no)?));
            }
            ("nodes", Some(_)) => return Err(syntax("duplicate `nodes` header".into())),
            (_, None) => return Err(syntax("missing `nodes <count>` header".into())),
            ("labels", Some(g)) => {
                let [_, k] = fields[..] else {
                    return Err(syntax("expected `labels <k>`".into()));
                };
                if g.edge_count > 0 {
                    return Err(syntax("`labels` must precede edges".into()));
                }
                g.alphabet = Some(parse_num(k, line_no)?);
            }
            ("edge", Some(g)) => {
                let [_, src, kind, dst] = fields[..] else {
                    return Err(syntax("expected `edge <src> <kind> <dst>`".into()));
                };
                let src = parse_num(src, line_no)?;
                let kind = parse_num(kind, line_no)?;
                let dst = parse_num(dst, line_no)?;
                g.add_edge(src, Label::open(kind), dst)?;
            }
            (other, Some(_)) => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }
    graph.ok_or(Error::Syntax { line: 0, message: "empty input, missing `nodes <count>`".into() })
}

pub(crate) fn parse_num<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::Syntax { line, message: format!("invalid number `{field}`") })
}

pub fn serialize_graph(g: &InputGraph) -> String {
    let mut out = format!("nodes {}\n", g.node_count);
    if let Some(k) = g.alphabet {
        writeln!(out, "labels {k}").unwrap();
    }
    for e in g.edges() {
        writeln!(out, "edge {} {} {}", e.src, e.kind, e.dst).unwrap();
    }
    out
}
