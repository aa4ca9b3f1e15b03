//! Ground truth independent of the merging engine.
//!
//! [`cfl_closure`] saturates the grammar `D -> ε | D D | (i D )i` over the
//! explicit open and close edges of the graph. It never looks at anchors,
//! representatives, or weights.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{InputGraph, Kind, NodeId};
use crate::partition::Fingerprint;
use crate::solver_static::opt_dyck;

pub const DEFAULT_BOUND: usize = 64;

/// `reach[a][b]` holds iff some path from `a` to `b` spells a Dyck word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachMatrix {
    reach: Vec<Vec<bool>>,
}

impl ReachMatrix {
    pub fn len(&self) -> usize {
        self.reach.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reach.is_empty()
    }

    pub fn get(&self, a: NodeId, b: NodeId) -> bool {
        self.reach[a][b]
    }

    pub fn check_equivalence(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            if !self.reach[a][a] {
                return Err(Error::NotEquivalence(format!("not reflexive at {a}")));
            }
            for b in 0..n {
                if self.reach[a][b] != self.reach[b][a] {
                    return Err(Error::NotEquivalence(format!("not symmetric at ({a}, {b})")));
                }
                if !self.reach[a][b] {
                    continue;
                }
                for c in 0..n {
                    if self.reach[b][c] && !self.reach[a][c] {
                        return Err(Error::NotEquivalence(format!("not transitive at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Classes of the relation; only meaningful once it is an equivalence.
    pub fn classes(&self) -> Fingerprint {
        let n = self.len();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if assigned[a] {
                continue;
            }
            let class: Vec<NodeId> = (a..n).filter(|&b| self.reach[a][b]).collect();
            for &b in &class {
                assigned[b] = true;
            }
            classes.push(class);
        }
        classes
    }
}

/// Saturates Dyck reachability with a pair worklist.
pub fn reach_matrix(g: &InputGraph) -> ReachMatrix {
    let n = g.node_count();
    // open[y] = (kind, x) for x -(kind-> y; close_from[z] = (kind, w) for z -)kind-> w
    let mut open_into: Vec<Vec<(Kind, NodeId)>> = vec![Vec::new(); n];
    let mut close_from: Vec<Vec<(Kind, NodeId)>> = vec![Vec::new(); n];
    for e in g.edges() {
        open_into[e.dst].push((e.kind, e.src));
        close_from[e.dst].push((e.kind, e.src));
    }

    let mut reach = vec![vec![false; n]; n];
    let mut queue = VecDeque::new();
    let add = |reach: &mut Vec<Vec<bool>>, queue: &mut VecDeque<(NodeId, NodeId)>, a: NodeId, b: NodeId| {
        if !reach[a][b] {
            reach[a][b] = true;
            queue.push_back((a, b));
        }
    };
    for x in 0..n {
        add(&mut reach, &mut queue, x, x);
    }
    while let Some((y, z)) = queue.pop_front() {
        // x -(i-> y, D(y, z), z -)i-> w  =>  D(x, w)
        for &(ki, x) in &open_into[y] {
            for &(kc, w) in &close_from[z] {
                if ki == kc {
                    add(&mut reach, &mut queue, x, w);
                }
            }
        }
        // D(y, z), D(z, c) => D(y, c) ; D(a, y), D(y, z) => D(a, z)
        for c in 0..n {
            if reach[z][c] {
                add(&mut reach, &mut queue, y, c);
            }
            if reach[c][y] {
                add(&mut reach, &mut queue, c, z);
            }
        }
    }
    ReachMatrix { reach }
}

/// Dyck-reachability classes by brute-force closure.
pub fn cfl_closure(g: &InputGraph) -> Result<Fingerprint> {
    cfl_closure_bounded(g, DEFAULT_BOUND)
}

pub fn cfl_closure_bounded(g: &InputGraph, bound: usize) -> Result<Fingerprint> {
    if g.node_count() > bound {
        return Err(Error::GraphTooLarge { node_count: g.node_count(), bound });
    }
    let m = reach_matrix(g);
    m.check_equivalence()?;
    Ok(m.classes())
}

/// Partition of a from-scratch static solve.
pub fn rebuild_partition(g: &InputGraph) -> Fingerprint {
    opt_dyck(g).partition().fingerprint()
}
