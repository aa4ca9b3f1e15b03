//! Union-find over node ids with per-root member lists.
//!
//! `find` answers `resp_node`: the representative of a node's class. Roots
//! keep the full member list of their class so a class can be enumerated and
//! rebuilt without scanning every node.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Sorted list of sorted classes, independent of representative naming.
pub type Fingerprint = Vec<Vec<NodeId>>;

#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<NodeId>,
    /// Populated for roots only; empty for every other node.
    members: Vec<Vec<NodeId>>,
    class_count: usize,
}

impl DisjointSets {
    pub fn new(node_count: usize) -> Self {
        DisjointSets {
            parent: (0..node_count).collect(),
            members: (0..node_count).map(|x| vec![x]).collect(),
            class_count: node_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    fn check(&self, x: NodeId) -> Result<()> {
        if x < self.parent.len() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: x, node_count: self.parent.len() })
        }
    }

    pub fn find(&mut self, x: NodeId) -> Result<NodeId> {
        self.check(x)?;
        Ok(self.find_root(x))
    }

    pub(crate) fn find_root(&mut self, x: NodeId) -> NodeId {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Representative lookup without path compression.
    pub fn find_const(&self, x: NodeId) -> NodeId {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        root
    }

    pub fn is_rep(&self, x: NodeId) -> bool {
        x < self.parent.len() && self.parent[x] == x
    }

    /// Merges the classes of `a` and `b`. The larger class keeps its root;
    /// on a size tie the smaller root id survives.
    pub fn union(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        self.check(a)?;
        self.check(b)?;
        let ra = self.find_root(a);
        let rb = self.find_root(b);
        if ra == rb {
            return Ok(ra);
        }
        let (sa, sb) = (self.members[ra].len(), self.members[rb].len());
        let (winner, loser) = if sa > sb || (sa == sb && ra < rb) { (ra, rb) } else { (rb, ra) };
        self.parent[loser] = winner;
        let moved = std::mem::take(&mut self.members[loser]);
        self.members[winner].extend(moved);
        self.class_count -= 1;
        Ok(winner)
    }

    pub fn members(&self, r: NodeId) -> Result<&[NodeId]> {
        if !self.is_rep(r) {
            return Err(Error::NotARepresentative(r));
        }
        Ok(&self.members[r])
    }

    pub fn class_size(&self, r: NodeId) -> usize {
        self.members[r].len()
    }

    pub fn reps(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.parent.len()).filter(|&x| self.parent[x] == x)
    }

    /// Replaces the class rooted at `r` by `parts`, which must partition its
    /// members exactly. Each part is rooted at its smallest member. Trees of
    /// other classes never point into this one, so only the members' links
    /// are rewritten.
    pub fn rebuild_class(&mut self, r: NodeId, parts: &[Vec<NodeId>]) -> Result<Vec<NodeId>> {
        if !self.is_rep(r) {
            return Err(Error::NotARepresentative(r));
        }
        debug_assert_eq!(
            {
                let mut all: Vec<NodeId> = parts.iter().flatten().copied().collect();
                all.sort_unstable();
                all
            },
            {
                let mut m = self.members[r].clone();
                m.sort_unstable();
                m
            },
            "parts must partition the class of {r}"
        );
        self.members[r].clear();
        let mut roots = Vec::with_capacity(parts.len());
        for part in parts {
            let root = *part.iter().min().expect("empty part");
            for &m in part {
                self.parent[m] = root;
                self.members[m].clear();
            }
            self.members[root] = part.clone();
            roots.push(root);
        }
        self.class_count += parts.len() - 1;
        Ok(roots)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let mut classes: Vec<Vec<NodeId>> = self
            .reps()
            .map(|r| {
                let mut m = self.members[r].clone();
                m.sort_unstable();
                m
            })
            .collect();
        classes.sort_unstable();
        classes
    }
}

impl PartialEq for DisjointSets {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint() == other.fingerprint()
    }
}

impl Eq for DisjointSets {}

/// One class per line, members space-separated, ordered by smallest member.
pub fn format_fingerprint(fp: &Fingerprint) -> String {
    let mut out = String::new();
    for class in fp {
        let line: Vec<String> = class.iter().map(|m| m.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}
