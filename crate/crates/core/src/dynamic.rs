//! Dynamic maintenance of the merged graph under edge insertions and
//! deletions.
//!
//! Insertion bumps one merged weight and restores the fixpoint from the one
//! group that may have gained a source.
//!
//! Deletion first removes the original edge and decrements its merged weight,
//! then looks at the region of the merged graph that can reach
//! `resp_node(u)`. Only classes in that region can depend on the deleted
//! edge. If the region contains cycles, every class on one of those cycles is
//! exploded into singletons, since mutually dependent classes cannot be told
//! apart by their weights. The remaining classes of the region are then
//! repartitioned by witness connectivity, walking backwards from
//! `resp_node(u)`, and a final fixpoint pass re-merges whatever the splits
//! over-separated.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, InputGraph, Kind, Label, NodeId};
use crate::merged::{Group, MergedGraph};
use crate::partition::{format_fingerprint, Fingerprint};
use crate::scc::strongly_connected_components;
use crate::solver_static::{opt_dyck, restore_fixpoint};

/// Whether deletion tracks cycles in the merged graph. `Off` reproduces the
/// weight-only deletion, which keeps spuriously anchored classes merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CycleMode {
    #[default]
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Dynamic,
    /// Recompute the merged graph from scratch after every update.
    Rebuild,
}

/// Representatives lying on a cycle among the classes that can reach the
/// deletion point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleSet {
    pub reps: BTreeSet<NodeId>,
}

impl CycleSet {
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeletionPath {
    Acyclic,
    Cyclic,
    Rebuild,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionReport {
    pub edge: EdgeRef,
    /// Cycle set in terms of class names (smallest member) as they were
    /// before any split.
    pub cycle_classes: Vec<Vec<NodeId>>,
    pub path: DeletionPath,
    /// Number of classes split, counting every class that lost members.
    pub splits: usize,
    pub merges: usize,
}

/// Backward-reachable representatives of `r` that lie on a cycle (an SCC of
/// size ≥ 2 or a self-loop) of the subgraph they induce.
pub fn track_cycles(gm: &MergedGraph, r: NodeId) -> Result<CycleSet> {
    if !gm.is_rep(r) {
        return Err(if r >= gm.node_count() {
            Error::NodeOutOfRange { node: r, node_count: gm.node_count() }
        } else {
            Error::NotARepresentative(r)
        });
    }
    let mut seen = HashSet::from([r]);
    let mut region = vec![r];
    let mut stack = vec![r];
    while let Some(x) = stack.pop() {
        for (_, s, _) in gm.in_edges(x) {
            if seen.insert(s) {
                region.push(s);
                stack.push(s);
            }
        }
    }
    region.sort_unstable();
    let components = strongly_connected_components(&region, |x| gm.out_edges(x).map(|(_, d, _)| d));
    let mut reps = BTreeSet::new();
    for comp in components {
        let cyclic = comp.len() > 1 || gm.out_edges(comp[0]).any(|(_, d, _)| d == comp[0]);
        if cyclic {
            reps.extend(comp);
        }
    }
    Ok(CycleSet { reps })
}

#[derive(Debug, Clone)]
pub struct Engine {
    g: InputGraph,
    gm: MergedGraph,
    mode: CycleMode,
    strategy: Strategy,
}

impl Engine {
    pub fn new(g: InputGraph, mode: CycleMode, strategy: Strategy) -> Self {
        let gm = opt_dyck(&g);
        Engine { g, gm, mode, strategy }
    }

    pub fn graph(&self) -> &InputGraph {
        &self.g
    }

    pub fn merged(&self) -> &MergedGraph {
        &self.gm
    }

    pub fn mode(&self) -> CycleMode {
        self.mode
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.gm.partition().fingerprint()
    }

    pub fn classes_dump(&self) -> String {
        format_fingerprint(&self.fingerprint())
    }

    pub fn medges_dump(&self) -> String {
        self.gm.dump()
    }

    pub fn resp_node(&self, x: NodeId) -> Result<NodeId> {
        self.g.check_node(x)?;
        Ok(self.gm.partition().find_const(x))
    }

    pub fn query_reachable(&self, a: NodeId, b: NodeId) -> Result<bool> {
        Ok(self.resp_node(a)? == self.resp_node(b)?)
    }

    /// Recount and fixpoint checks; the first violation found, if any.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        self.gm.check_recount(&self.g)?;
        if let Some((dst, kind)) = self.gm.fixpoint_violations().first() {
            return Err(format!(
                "group ({}, {kind}) has several source classes",
                self.gm.class_name(*dst)
            ));
        }
        Ok(())
    }

    pub fn insert_edge(&mut self, u: NodeId, label: Label, v: NodeId) -> Result<EdgeRef> {
        let e = self.g.add_edge(u, label, v)?;
        if self.strategy == Strategy::Rebuild {
            self.gm = opt_dyck(&self.g);
            return Ok(e);
        }
        let (rs, rd) = (self.gm.rep(e.src), self.gm.rep(e.dst));
        self.gm.adjust_weight(rs, e.kind, rd, 1)?;
        restore_fixpoint(&mut self.gm, [(rd, e.kind)]);
        Ok(e)
    }

    pub fn delete_edge(&mut self, u: NodeId, label: Label, v: NodeId) -> Result<DeletionReport> {
        let e = self.g.remove_edge(u, label, v)?;
        if self.strategy == Strategy::Rebuild {
            self.gm = opt_dyck(&self.g);
            return Ok(DeletionReport {
                edge: e,
                cycle_classes: Vec::new(),
                path: DeletionPath::Rebuild,
                splits: 0,
                merges: 0,
            });
        }
        let (rs, rd) = (self.gm.rep(e.src), self.gm.rep(e.dst));
        self.gm.adjust_weight(rs, e.kind, rd, -1)?;

        let cycles = match self.mode {
            CycleMode::On => track_cycles(&self.gm, rs)?,
            CycleMode::Off => CycleSet::default(),
        };
        let cycle_classes = cycles
            .reps
            .iter()
            .map(|&r| {
                let mut m = self.gm.members(r).expect("cycle set holds representatives").to_vec();
                m.sort_unstable();
                m
            })
            .collect();

        if cycles.is_empty() {
            let (splits, merges) = self.dynamic_deletion_acyclic(e);
            return Ok(DeletionReport { edge: e, cycle_classes, path: DeletionPath::Acyclic, splits, merges });
        }

        let mut touched = Vec::new();
        let mut pending = vec![e.src];
        let mut splits = 0;
        for &n in &cycles.reps {
            let pieces = self.gm.split_rep(n, &self.g)?;
            if pieces.len() > 1 {
                splits += 1;
            }
            for p in pieces {
                self.gm.extend_incident_groups(p, &mut touched);
                pending.extend(self.gm.predecessors(p));
            }
        }
        splits += self.repartition_cascade(pending, &mut touched);
        let merges = restore_fixpoint(&mut self.gm, touched);
        Ok(DeletionReport { edge: e, cycle_classes, path: DeletionPath::Cyclic, splits, merges })
    }

    /// Deletion when no class that reaches `resp_node(deleted.src)` lies on a
    /// cycle. The edge must already be gone from `g` and the merged weight
    /// decremented. Returns `(splits, merges)`.
    pub fn dynamic_deletion_acyclic(&mut self, deleted: EdgeRef) -> (usize, usize) {
        let mut touched = Vec::new();
        let splits = self.repartition_cascade(vec![deleted.src], &mut touched);
        let merges = restore_fixpoint(&mut self.gm, touched);
        (splits, merges)
    }

    /// Repartitions the classes of `start` by witness connectivity and
    /// propagates to the predecessors of every class that split.
    fn repartition_cascade(&mut self, start: Vec<NodeId>, touched: &mut Vec<Group>) -> usize {
        // A class only splits when it is popped, so a queued representative
        // stays one until then; enqueueing it twice is wasted work.
        let mut queued: HashSet<NodeId> = HashSet::new();
        let mut worklist = VecDeque::new();
        for x in start {
            let r = self.gm.rep(x);
            if queued.insert(r) {
                worklist.push_back(r);
            }
        }
        let mut splits = 0;
        while let Some(r) = worklist.pop_front() {
            queued.remove(&r);
            let Some(parts) = self.witness_components(r) else { continue };
            splits += 1;
            let pieces = self.gm.refine_rep(r, &parts, &self.g).expect("r is a representative");
            for p in pieces {
                self.gm.extend_incident_groups(p, touched);
                for q in self.gm.predecessors(p) {
                    let q = self.gm.rep(q);
                    if queued.insert(q) {
                        worklist.push_back(q);
                    }
                }
            }
        }
        splits
    }

    /// Two-member case of `witness_components`, without scratch allocations.
    fn witness_pair(&mut self, a: NodeId, b: NodeId) -> Option<Vec<Vec<NodeId>>> {
        let (a, b) = (a.min(b), a.max(b));
        let gm = &mut self.gm;
        for (ka, ca) in self.g.out_edges(a) {
            let ra = gm.rep(ca);
            for (kb, cb) in self.g.out_edges(b) {
                if ka == kb && gm.rep(cb) == ra {
                    return None;
                }
            }
        }
        Some(vec![vec![a], vec![b]])
    }

    /// Connected components of the class of `r` where two members are linked
    /// when they have same-kind original edges into one current class.
    /// `None` when the class stays whole.
    fn witness_components(&mut self, r: NodeId) -> Option<Vec<Vec<NodeId>>> {
        let members = self.gm.members(r).expect("r is a representative");
        match *members {
            [] | [_] => return None,
            [a, b] => return self.witness_pair(a, b),
            _ => {}
        }
        let members = members.to_vec();
        let mut keys: Vec<(Kind, NodeId, usize)> = Vec::new();
        for (i, &m) in members.iter().enumerate() {
            for (k, c) in self.g.out_edges(m) {
                keys.push((k, self.gm.rep(c), i));
            }
        }
        keys.sort_unstable();
        let mut parent: Vec<usize> = (0..members.len()).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut components = members.len();
        for pair in keys.windows(2) {
            let ((k1, c1, i), (k2, c2, j)) = (pair[0], pair[1]);
            if (k1, c1) != (k2, c2) {
                continue;
            }
            let (a, b) = (root(&mut parent, i), root(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
                components -= 1;
            }
        }
        if components == 1 {
            return None;
        }
        let mut tagged: Vec<(NodeId, NodeId)> = (0..members.len())
            .map(|i| {
                let top = root(&mut parent, i);
                (members[top], members[i])
            })
            .collect();
        tagged.sort_unstable();
        let mut parts: Vec<Vec<NodeId>> = tagged
            .chunk_by(|a, b| a.0 == b.0)
            .map(|chunk| chunk.iter().map(|&(_, m)| m).collect())
            .collect();
        for part in &mut parts {
            part.sort_unstable();
        }
        parts.sort_unstable();
        Some(parts)
    }
}
