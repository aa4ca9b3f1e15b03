//! Static solver: merges classes until every `(target, kind)` group has at
//! most one source representative.
//!
//! Two sources `a -(i-> w` and `b -(i-> w` sharing the anchor `w` are
//! Dyck-reachable from each other (`(i` then `)i`), so their classes merge.
//! Only sources are merged; the targets of a merged class's outgoing edges
//! are never forced together.

use std::collections::VecDeque;

use crate::graph::InputGraph;
use crate::merged::{Group, MergedGraph};

/// Computes the coarsest merged graph of `g` from scratch.
pub fn opt_dyck(g: &InputGraph) -> MergedGraph {
    let mut gm = MergedGraph::singletons(g);
    let seeds: Vec<Group> = (0..g.node_count())
        .flat_map(|r| gm.incident_groups(r))
        .collect();
    restore_fixpoint(&mut gm, seeds);
    gm
}

/// Drives `gm` back to a fixpoint. `seeds` must include every group whose
/// source set may have grown since the last fixpoint; groups are re-resolved
/// through the partition, so stale representatives are fine. Returns the
/// number of merges performed.
pub fn restore_fixpoint(gm: &mut MergedGraph, seeds: impl IntoIterator<Item = Group>) -> usize {
    let mut worklist: VecDeque<Group> = seeds.into_iter().collect();
    let mut merges = 0;
    while let Some((dst, kind)) = worklist.pop_front() {
        loop {
            let dst = gm.rep(dst);
            let Some((a, b)) = gm.source_pair(dst, kind) else { break };
            let outcome = gm.merge_reps(a, b).expect("group sources are distinct representatives");
            merges += 1;
            worklist.extend(outcome.touched);
        }
    }
    merges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Label;

    const U: usize = 0;
    const V: usize = 1;
    const W: usize = 2;
    const X1: usize = 3;
    const X2: usize = 4;
    const Y1: usize = 5;
    const Y2: usize = 6;

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

    #[test]
    fn fork_merges_sources() {
        let g = InputGraph::from_edges(3, &[(U, 1, W), (V, 1, W)]).unwrap();
        let gm = opt_dyck(&g);
        assert_eq!(gm.partition().fingerprint(), vec![vec![U, V], vec![W]]);
        assert_eq!(gm.named_edges(), vec![(U, 1, W, 2)]);
    }

    #[test]
    fn two_cycles_merge_pairwise() {
        let g = two_cycles();
        let gm = opt_dyck(&g);
        assert_eq!(gm.partition().fingerprint(), vec![vec![U, V], vec![W], vec![X1, Y1], vec![X2, Y2]]);
        assert_eq!(
            gm.named_edges(),
            vec![(U, 1, W, 2), (U, 1, X1, 2), (X1, 1, X2, 2), (X2, 1, U, 2)]
        );
        gm.check_recount(&g).unwrap();
    }

    #[test]
    fn cut_is_all_singletons() {
        let mut g = two_cycles();
        g.remove_edge(V, Label::open(1), W).unwrap();
        let gm = opt_dyck(&g);
        assert_eq!(gm.partition().class_count(), 7);
        assert_eq!(gm.edge_count(), 7);
        assert!(gm.edges().iter().all(|e| e.weight == 1));
    }

    #[test]
    fn single_edge_has_no_merges() {
        let g = InputGraph::from_edges(2, &[(U, 1, V)]).unwrap();
        assert_eq!(opt_dyck(&g).partition().class_count(), 2);
    }

    #[test]
    fn targets_of_a_class_are_not_merged() {
        // 0 -(1-> 1 and 0 -(1-> 2: the path 1 )1 0 (1 2 is not a Dyck word.
        let g = InputGraph::from_edges(3, &[(0, 1, 1), (0, 1, 2)]).unwrap();
        assert_eq!(opt_dyck(&g).partition().class_count(), 3);
    }

    #[test]
    fn different_kinds_do_not_anchor() {
        let g = InputGraph::from_edges(3, &[(0, 1, 2), (1, 2, 2)]).unwrap();
        assert_eq!(opt_dyck(&g).partition().class_count(), 3);
    }

    #[test]
    fn self_loop_and_edge_into_same_anchor() {
        // 0 -(1-> 0 and 1 -(1-> 0 merge 0 and 1; the merged class gets a
        // weight-2 self-loop.
        let g = InputGraph::from_edges(2, &[(0, 1, 0), (1, 1, 0)]).unwrap();
        let gm = opt_dyck(&g);
        assert_eq!(gm.partition().class_count(), 1);
        assert_eq!(gm.named_edges(), vec![(0, 1, 0, 2)]);
    }

    #[test]
    fn merges_cascade_upward() {
        // p_i, q_i pairs on a chain above anchor z=0.
        let n = 6;
        let mut edges = vec![(1, 1, 0), (2, 1, 0)];
        for i in 1..n {
            edges.push((2 * i + 1, 1, 2 * i - 1));
            edges.push((2 * i + 2, 1, 2 * i));
        }
        let g = InputGraph::from_edges(2 * n + 1, &edges).unwrap();
        let gm = opt_dyck(&g);
        assert_eq!(gm.partition().class_count(), n + 1);
        assert!(gm.fixpoint_violations().is_empty());
    }

    #[test]
    fn restore_is_idempotent_on_fixpoint() {
        let g = two_cycles();
        let mut gm = opt_dyck(&g);
        let before = gm.named_edges();
        let seeds: Vec<_> = (0..7).flat_map(|r| if gm.is_rep(r) { gm.incident_groups(r) } else { vec![] }).collect();
        assert_eq!(restore_fixpoint(&mut gm, seeds), 0);
        assert_eq!(gm.named_edges(), before);
    }

    #[test]
    fn remerge_after_split_without_x1_x2() {
        let mut g = two_cycles();
        let mut gm = opt_dyck(&g);
        g.remove_edge(X1, Label::open(1), X2).unwrap();
        let r = gm.find(X1).unwrap();
        let d = gm.find(X2).unwrap();
        gm.adjust_weight(r, 1, d, -1).unwrap();
        let mut seeds = Vec::new();
        for x in [U, X1, X2] {
            let r = gm.find(x).unwrap();
            for p in gm.split_rep(r, &g).unwrap() {
                seeds.extend(gm.incident_groups(p));
            }
        }
        restore_fixpoint(&mut gm, seeds);
        assert_eq!(gm.partition().fingerprint(), vec![vec![U, V], vec![W], vec![X1], vec![X2, Y2], vec![Y1]]);
        assert_eq!(
            gm.named_edges(),
            vec![(U, 1, W, 2), (U, 1, X1, 1), (U, 1, Y1, 1), (X2, 1, U, 2), (Y1, 1, X2, 1)]
        );
        gm.check_recount(&g).unwrap();
    }
}
