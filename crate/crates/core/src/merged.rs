//! The weighted merged graph: the quotient of the input graph by the current
//! partition. Each merged edge `R -(i-> S` carries the number of original
//! edges `a -(i-> b` with `a ∈ R` and `b ∈ S`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{InputGraph, Kind, NodeId};
use crate::partition::DisjointSets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MergedEdge {
    pub src: NodeId,
    pub kind: Kind,
    pub dst: NodeId,
    pub weight: u32,
}

/// A `(target representative, kind)` pair: the unit of the anchor check.
pub type Group = (NodeId, Kind);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeOutcome {
    pub rep: NodeId,
    /// Groups whose set of source representatives changed.
    pub touched: Vec<Group>,
}

#[derive(Debug, Clone)]
pub struct MergedGraph {
    partition: DisjointSets,
    /// Indexed by representative: `(kind, dst) -> weight`.
    out: Vec<BTreeMap<(Kind, NodeId), u32>>,
    /// Indexed by representative: `(kind, src) -> weight`.
    inc: Vec<BTreeMap<(Kind, NodeId), u32>>,
}

impl MergedGraph {
    /// Quotient of `g` by `partition`, with weights recounted from scratch.
    pub fn quotient(g: &InputGraph, mut partition: DisjointSets) -> Self {
        let n = g.node_count();
        assert_eq!(partition.node_count(), n, "partition and graph disagree on node count");
        let mut gm = MergedGraph {
            out: vec![BTreeMap::new(); n],
            inc: vec![BTreeMap::new(); n],
            partition: DisjointSets::new(0),
        };
        for e in g.edges() {
            let (s, d) = (partition.find_root(e.src), partition.find_root(e.dst));
            gm.add_weight(s, e.kind, d, 1);
        }
        gm.partition = partition;
        gm
    }

    /// Identity quotient: every node its own class.
    pub fn singletons(g: &InputGraph) -> Self {
        MergedGraph::quotient(g, DisjointSets::new(g.node_count()))
    }

    pub fn partition(&self) -> &DisjointSets {
        &self.partition
    }

    pub fn node_count(&self) -> usize {
        self.partition.node_count()
    }

    pub fn find(&mut self, x: NodeId) -> Result<NodeId> {
        self.partition.find(x)
    }

    pub(crate) fn rep(&mut self, x: NodeId) -> NodeId {
        self.partition.find_root(x)
    }

    pub fn is_rep(&self, r: NodeId) -> bool {
        self.partition.is_rep(r)
    }

    fn check_rep(&self, r: NodeId) -> Result<()> {
        if self.partition.is_rep(r) {
            Ok(())
        } else if r >= self.node_count() {
            Err(Error::NodeOutOfRange { node: r, node_count: self.node_count() })
        } else {
            Err(Error::NotARepresentative(r))
        }
    }

    pub fn members(&self, r: NodeId) -> Result<&[NodeId]> {
        self.partition.members(r)
    }

    /// Smallest member of the class rooted at `r`; the stable display name.
    pub fn class_name(&self, r: NodeId) -> NodeId {
        self.partition.members(r).ok().and_then(|m| m.iter().min().copied()).unwrap_or(r)
    }

    pub fn weight(&self, src: NodeId, kind: Kind, dst: NodeId) -> u32 {
        self.out.get(src).and_then(|m| m.get(&(kind, dst))).copied().unwrap_or(0)
    }

    /// `(kind, dst, weight)` for every merged edge leaving `r`.
    pub fn out_edges(&self, r: NodeId) -> impl Iterator<Item = (Kind, NodeId, u32)> + '_ {
        self.out[r].iter().map(|(&(k, d), &w)| (k, d, w))
    }

    /// `(kind, src, weight)` for every merged edge entering `r`.
    pub fn in_edges(&self, r: NodeId) -> impl Iterator<Item = (Kind, NodeId, u32)> + '_ {
        self.inc[r].iter().map(|(&(k, s), &w)| (k, s, w))
    }

    /// Distinct source representatives of `kind`-edges into `dst`.
    pub fn group_sources(&self, dst: NodeId, kind: Kind) -> Vec<NodeId> {
        self.inc[dst].range((kind, 0)..=(kind, NodeId::MAX)).map(|(&(_, s), _)| s).collect()
    }

    /// The two smallest sources of a group, if it has at least two.
    pub fn source_pair(&self, dst: NodeId, kind: Kind) -> Option<(NodeId, NodeId)> {
        let mut it = self.inc[dst].range((kind, 0)..=(kind, NodeId::MAX)).map(|(&(_, s), _)| s);
        Some((it.next()?, it.next()?))
    }

    /// Predecessor representatives of `r`, self excluded.
    pub fn predecessors(&self, r: NodeId) -> Vec<NodeId> {
        let mut preds: Vec<NodeId> = self.inc[r].keys().map(|&(_, s)| s).filter(|&s| s != r).collect();
        preds.sort_unstable();
        preds.dedup();
        preds
    }

    /// Every group whose source set involves `r`: its own incoming groups and
    /// the groups its outgoing edges feed.
    pub fn incident_groups(&self, r: NodeId) -> Vec<Group> {
        let mut groups = Vec::new();
        self.extend_incident_groups(r, &mut groups);
        groups
    }

    /// Appends `incident_groups(r)` to `out`.
    pub fn extend_incident_groups(&self, r: NodeId, out: &mut Vec<Group>) {
        let mut last = None;
        for &(k, _) in self.inc[r].keys() {
            // keys are ordered by kind
            if last != Some(k) {
                out.push((r, k));
                last = Some(k);
            }
        }
        out.extend(self.out[r].keys().map(|&(k, d)| (d, k)));
    }

    /// All merged edges, sorted by `(src, kind, dst)` representative ids.
    pub fn edges(&self) -> Vec<MergedEdge> {
        let mut edges: Vec<MergedEdge> = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(src, m)| {
                m.iter().map(move |(&(kind, dst), &weight)| MergedEdge { src, kind, dst, weight })
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(BTreeMap::len).sum()
    }

    pub fn total_weight(&self) -> usize {
        self.out.iter().flat_map(|m| m.values()).map(|&w| w as usize).sum()
    }

    fn add_weight(&mut self, src: NodeId, kind: Kind, dst: NodeId, w: u32) {
        *self.out[src].entry((kind, dst)).or_insert(0) += w;
        *self.inc[dst].entry((kind, src)).or_insert(0) += w;
    }

    /// Drops every merged edge incident to `r`.
    fn detach(&mut self, r: NodeId) {
        let out = std::mem::take(&mut self.out[r]);
        let inc = std::mem::take(&mut self.inc[r]);
        for &(k, d) in out.keys() {
            if d != r {
                self.inc[d].remove(&(k, r));
            }
        }
        for &(k, s) in inc.keys() {
            if s != r {
                self.out[s].remove(&(k, r));
            }
        }
    }

    /// Unions two classes and folds the loser's merged edges into the winner.
    pub fn merge_reps(&mut self, r1: NodeId, r2: NodeId) -> Result<MergeOutcome> {
        self.check_rep(r1)?;
        self.check_rep(r2)?;
        if r1 == r2 {
            return Err(Error::SameRepresentative(r1));
        }
        let winner = self.partition.union(r1, r2)?;
        let loser = if winner == r1 { r2 } else { r1 };
        let out = self.out[loser].clone();
        let inc = self.inc[loser].clone();
        self.detach(loser);
        let relabel = |x: NodeId| if x == loser { winner } else { x };
        for (&(k, d), &w) in &out {
            self.add_weight(winner, k, relabel(d), w);
        }
        for (&(k, s), &w) in &inc {
            // self-loops on the loser were already carried over with `out`
            if s != loser {
                self.add_weight(relabel(s), k, winner, w);
            }
        }
        Ok(MergeOutcome { rep: winner, touched: self.incident_groups(winner) })
    }

    /// Replaces the class of `r` by `parts` and recounts every merged edge
    /// incident to the new classes from `g`. Returns the new representatives.
    pub fn refine_rep(&mut self, r: NodeId, parts: &[Vec<NodeId>], g: &InputGraph) -> Result<Vec<NodeId>> {
        self.check_rep(r)?;
        if parts.len() <= 1 {
            return Ok(vec![r]);
        }
        let members = self.partition.members(r)?.to_vec();
        self.detach(r);
        let roots = self.partition.rebuild_class(r, parts)?;
        // after the rebuild, old members are exactly those whose rep is a new root
        let roots_set: HashSet<NodeId> = if roots.len() > 8 { roots.iter().copied().collect() } else { HashSet::new() };
        let was_member = |rep: NodeId| if roots.len() > 8 { roots_set.contains(&rep) } else { roots.contains(&rep) };
        for &m in &members {
            let ms = self.rep(m);
            for (k, d) in g.out_edges(m) {
                let ds = self.rep(d);
                self.add_weight(ms, k, ds, 1);
            }
            for (k, s) in g.in_edges(m) {
                let ss = self.rep(s);
                if !was_member(ss) {
                    self.add_weight(ss, k, ms, 1);
                }
            }
        }
        Ok(roots)
    }

    /// Explodes the class of `r` into singletons.
    pub fn split_rep(&mut self, r: NodeId, g: &InputGraph) -> Result<Vec<NodeId>> {
        self.check_rep(r)?;
        let parts: Vec<Vec<NodeId>> = self.partition.members(r)?.iter().map(|&m| vec![m]).collect();
        self.refine_rep(r, &parts, g)
    }

    /// Applies `delta` (+1 or -1) to one merged edge. Returns the new weight;
    /// 0 means the edge was removed.
    pub fn adjust_weight(&mut self, src: NodeId, kind: Kind, dst: NodeId, delta: i32) -> Result<u32> {
        self.check_rep(src)?;
        self.check_rep(dst)?;
        assert!(delta == 1 || delta == -1, "weight delta must be +1 or -1");
        if delta > 0 {
            self.add_weight(src, kind, dst, 1);
            return Ok(self.weight(src, kind, dst));
        }
        let Some(w) = self.out[src].get_mut(&(kind, dst)) else {
            return Err(Error::MissingEdge { src, kind, dst });
        };
        *w -= 1;
        let w = *w;
        if w == 0 {
            self.out[src].remove(&(kind, dst));
            self.inc[dst].remove(&(kind, src));
        } else {
            *self.inc[dst].get_mut(&(kind, src)).expect("mirrored adjacency") = w;
        }
        Ok(w)
    }

    /// Compares the maintained edges against a from-scratch quotient and
    /// describes the first mismatch.
    pub fn check_recount(&self, g: &InputGraph) -> std::result::Result<(), String> {
        let fresh = MergedGraph::quotient(g, self.partition.clone());
        let (mine, theirs) = (self.edges(), fresh.edges());
        if mine != theirs {
            let extra = mine.iter().find(|e| !theirs.contains(e));
            let missing = theirs.iter().find(|e| !mine.contains(e));
            return Err(format!("merged edges drifted: maintained-only {extra:?}, recount-only {missing:?}"));
        }
        for (r, m) in self.inc.iter().enumerate() {
            for (&(k, s), &w) in m {
                if self.weight(s, k, r) != w {
                    return Err(format!("incoming index out of sync at {s} -({k}-> {r}"));
                }
            }
        }
        let incoming: usize = self.inc.iter().map(BTreeMap::len).sum();
        if incoming != self.edge_count() {
            return Err("incoming index has stale entries".into());
        }
        if self.total_weight() != g.edge_count() {
            return Err(format!("total weight {} != edge count {}", self.total_weight(), g.edge_count()));
        }
        Ok(())
    }

    /// Whether any merged edge lies on a cycle (self-loops included).
    pub fn has_cycle(&self) -> bool {
        let reps: Vec<NodeId> = self.partition.reps().collect();
        let comps = crate::scc::strongly_connected_components(&reps, |x| {
            self.out[x].keys().map(|&(_, d)| d).collect::<Vec<_>>()
        });
        comps.iter().any(|c| c.len() > 1) || self.out.iter().enumerate().any(|(r, m)| m.keys().any(|&(_, d)| d == r))
    }

    /// Groups with two or more distinct source representatives.
    pub fn fixpoint_violations(&self) -> Vec<Group> {
        let mut bad = Vec::new();
        for (r, m) in self.inc.iter().enumerate() {
            let mut prev: Option<(Kind, NodeId)> = None;
            for &(k, s) in m.keys() {
                if let Some((pk, ps)) = prev {
                    if pk == k && ps != s && bad.last() != Some(&(r, k)) {
                        bad.push((r, k));
                    }
                }
                prev = Some((k, s));
            }
        }
        bad
    }

    /// `medge <src> <kind> <dst> <weight>` lines with classes named by their
    /// smallest member, sorted.
    pub fn dump(&self) -> String {
        let mut lines: Vec<(NodeId, Kind, NodeId, u32)> = self
            .edges()
            .into_iter()
            .map(|e| (self.class_name(e.src), e.kind, self.class_name(e.dst), e.weight))
            .collect();
        lines.sort_unstable();
        let mut out = String::new();
        for (s, k, d, w) in lines {
            writeln!(out, "medge {s} {k} {d} {w}").unwrap();
        }
        out
    }

    /// Merged edges keyed by class names, sorted; comparable across runs
    /// regardless of which member became the representative.
    pub fn named_edges(&self) -> Vec<(NodeId, Kind, NodeId, u32)> {
        let mut edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|e| (self.class_name(e.src), e.kind, self.class_name(e.dst), e.weight))
            .collect();
        edges.sort_unstable();
        edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Label;

    // (u,v,w,x1,x2,y1,y2) = (0..6)
    const U: NodeId = 0;
    const V: NodeId = 1;
    const W: NodeId = 2;
    const X1: NodeId = 3;
    const X2: NodeId = 4;
    const Y1: NodeId = 5;
    const Y2: NodeId = 6;

    fn fork() -> InputGraph {
        InputGraph::from_edges(3, &[(U, 1, W), (V, 1, W)]).unwrap()
    }

    fn two_cycles() -> InputGraph {
        InputGraph::from_edges(
            7,
            &[
                (U, 1, W),
                (V, 1, W),
                (V, 1, Y1),
                (Y1, 1, Y2),
                (Y2, 1, V),
                (U, 1, X1),
                (X1, 1, X2),
                (X2, 1, U),
            ],
        )
        .unwrap()
    }

    fn two_cycles_partition() -> DisjointSets {
        let mut ds = DisjointSets::new(7);
        ds.union(U, V).unwrap();
        ds.union(X1, Y1).unwrap();
        ds.union(X2, Y2).unwrap();
        ds
    }

    #[test]
    fn quotient_fork() {
        let mut ds = DisjointSets::new(3);
        ds.union(U, V).unwrap();
        let gm = MergedGraph::quotient(&fork(), ds);
        assert_eq!(gm.named_edges(), vec![(U, 1, W, 2)]);
    }

    #[test]
    fn quotient_two_cycles() {
        let gm = MergedGraph::quotient(&two_cycles(), two_cycles_partition());
        assert_eq!(
            gm.named_edges(),
            vec![(U, 1, W, 2), (U, 1, X1, 2), (X1, 1, X2, 2), (X2, 1, U, 2)]
        );
        assert!(gm.fixpoint_violations().is_empty());
    }

    #[test]
    fn identity_quotient() {
        let g = two_cycles();
        let gm = MergedGraph::singletons(&g);
        assert_eq!(gm.edge_count(), g.edge_count());
        assert!(gm.edges().iter().all(|e| e.weight == 1));
        assert_eq!(gm.fixpoint_violations(), vec![(W, 1)]);
    }

    #[test]
    fn cycle_detection() {
        let g = two_cycles();
        assert!(MergedGraph::quotient(&g, two_cycles_partition()).has_cycle());
        assert!(!MergedGraph::singletons(&fork()).has_cycle());
        let looped = InputGraph::from_edges(2, &[(1, 1, 1)]).unwrap();
        assert!(MergedGraph::singletons(&looped).has_cycle());
    }

    #[test]
    fn merge_folds_parallel_edges() {
        let g = fork();
        let mut gm = MergedGraph::singletons(&g);
        let out = gm.merge_reps(U, V).unwrap();
        assert_eq!(out.rep, U);
        assert_eq!(gm.named_edges(), vec![(U, 1, W, 2)]);
        assert!(out.touched.contains(&(W, 1)));
        gm.check_recount(&g).unwrap();
    }

    #[test]
    fn merge_isolated_reps() {
        let g = InputGraph::new(2);
        let mut gm = MergedGraph::singletons(&g);
        let out = gm.merge_reps(1, 0).unwrap();
        assert_eq!(gm.partition().class_count(), 1);
        assert_eq!(gm.edge_count(), 0);
        assert!(out.touched.is_empty());
    }

    #[test]
    fn merge_keeps_kinds_apart() {
        // r1=0, r2=1, w=2; recount oracle for the folded state is `quotient`.
        let g = InputGraph::from_edges(4, &[(0, 1, 2), (1, 2, 2)]).unwrap();
        let mut gm = MergedGraph::singletons(&g);
        gm.merge_reps(0, 1).unwrap();
        assert_eq!(gm.named_edges(), vec![(0, 1, 2, 1), (0, 2, 2, 1)]);
        let mut ds = DisjointSets::new(4);
        ds.union(0, 1).unwrap();
        assert_eq!(MergedGraph::quotient(&g, ds).named_edges(), gm.named_edges());
    }

    #[test]
    fn merge_turns_cross_edges_into_self_loops() {
        let g = InputGraph::from_edges(3, &[(0, 1, 1), (1, 1, 0), (1, 2, 1), (2, 1, 0)]).unwrap();
        let mut gm = MergedGraph::singletons(&g);
        gm.merge_reps(0, 1).unwrap();
        assert_eq!(gm.named_edges(), vec![(0, 1, 0, 2), (0, 2, 0, 1), (2, 1, 0, 1)]);
        gm.check_recount(&g).unwrap();
    }

    #[test]
    fn merge_errors() {
        let g = fork();
        let mut gm = MergedGraph::singletons(&g);
        assert_eq!(gm.merge_reps(U, U), Err(Error::SameRepresentative(U)));
        gm.merge_reps(U, V).unwrap();
        assert_eq!(gm.merge_reps(V, W), Err(Error::NotARepresentative(V)));
        assert!(matches!(gm.merge_reps(9, W), Err(Error::NodeOutOfRange { .. })));
    }

    #[test]
    fn split_uv_alone_on_two_cycles() {
        let g = two_cycles();
        let mut gm = MergedGraph::quotient(&g, two_cycles_partition());
        let r = gm.find(U).unwrap();
        let mut reps = gm.split_rep(r, &g).unwrap();
        reps.sort();
        assert_eq!(reps, vec![U, V]);
        assert_eq!(
            gm.named_edges(),
            vec![
                (U, 1, W, 1),
                (U, 1, X1, 1),
                (V, 1, W, 1),
                (V, 1, X1, 1),
                (X1, 1, X2, 2),
                (X2, 1, U, 1),
                (X2, 1, V, 1),
            ]
        );
        gm.check_recount(&g).unwrap();
    }

    #[test]
    fn split_all_cycle_nodes_on_cut() {
        let mut g = two_cycles();
        let mut gm = MergedGraph::quotient(&g, two_cycles_partition());
        g.remove_edge(V, Label::open(1), W).unwrap();
        let r = gm.find(V).unwrap();
        gm.adjust_weight(r, 1, W, -1).unwrap();
        for x in [U, X1, X2] {
            let r = gm.find(x).unwrap();
            gm.split_rep(r, &g).unwrap();
        }
        let expected: Vec<_> = g.edges().map(|e| (e.src, e.kind, e.dst, 1)).collect();
        assert_eq!(gm.named_edges(), expected);
        assert_eq!(gm.edge_count(), 7);
    }

    #[test]
    fn split_singleton_is_identity() {
        let g = two_cycles();
        let mut gm = MergedGraph::quotient(&g, two_cycles_partition());
        let before = gm.named_edges();
        assert_eq!(gm.split_rep(W, &g).unwrap(), vec![W]);
        assert_eq!(gm.named_edges(), before);
        assert_eq!(gm.split_rep(V, &g), Err(Error::NotARepresentative(V)));
    }

    #[test]
    fn adjust_weight_without_split() {
        let g = two_cycles();
        let mut gm = MergedGraph::quotient(&g, two_cycles_partition());
        let r = gm.find(U).unwrap();
        assert_eq!(gm.adjust_weight(r, 1, W, -1), Ok(1));
        assert_eq!(gm.weight(r, 1, W), 1);
        assert_eq!(gm.adjust_weight(r, 1, W, -1), Ok(0));
        assert_eq!(gm.weight(r, 1, W), 0);
        assert!(gm.group_sources(W, 1).is_empty());
        assert_eq!(gm.adjust_weight(r, 1, W, -1), Err(Error::MissingEdge { src: r, kind: 1, dst: W }));
    }

    #[test]
    fn adjust_weight_inverse() {
        let g = fork();
        let mut gm = MergedGraph::singletons(&g);
        let before = gm.edges();
        assert_eq!(gm.adjust_weight(W, 3, U, 1), Ok(1));
        assert_eq!(gm.adjust_weight(W, 3, U, -1), Ok(0));
        assert_eq!(gm.edges(), before);
        assert_eq!(gm.check_recount(&g), Ok(()));
    }

    #[test]
    fn recount_detects_drift() {
        let g = fork();
        let mut gm = MergedGraph::singletons(&g);
        gm.adjust_weight(U, 1, W, 1).unwrap();
        assert!(gm.check_recount(&g).is_err());
    }

    #[test]
    fn dump_names_classes_by_smallest_member() {
        let g = two_cycles();
        let mut ds = DisjointSets::new(7);
        ds.union(V, U).unwrap();
        ds.union(Y1, X1).unwrap();
        ds.union(Y2, X2).unwrap();
        let gm = MergedGraph::quotient(&g, ds);
        assert_eq!(gm.dump(), "medge 0 1 2 2\nmedge 0 1 3 2\nmedge 3 1 4 2\nmedge 4 1 0 2\n");
    }
}
