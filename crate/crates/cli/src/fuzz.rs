//! Seeded random graphs and update streams, checked against both arbiters
//! after every operation.

use std::fmt::Write as _;

use dyck_core::{
    cfl_closure, rebuild_partition, serialize_graph, serialize_updates, CycleMode, Engine,
    InputGraph, Kind, Label, NodeId, Strategy, UpdateOp,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::session::inline_fingerprint;

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    pub mode: CycleMode,
    pub max_nodes: usize,
    pub max_kind: Kind,
    pub max_ops: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { seed: 1, trials: 1000, mode: CycleMode::On, max_nodes: 10, max_kind: 3, max_ops: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    /// 1-based update index in `updates` that first diverged.
    pub step: usize,
    pub reason: String,
    pub graph: String,
    pub updates: String,
    /// Whether the merged graph just before the failing update had a cycle.
    pub merged_cycle: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub trials: usize,
    pub operations: usize,
    pub failures: usize,
    /// Per kind of check: partition vs. closure, vs. rebuild, recount and
    /// fixpoint invariants, insert-then-delete inverse.
    pub closure_mismatches: usize,
    pub rebuild_mismatches: usize,
    pub invariant_violations: usize,
    pub inverse_violations: usize,
    pub first_counterexample: Option<Counterexample>,
}

impl FuzzReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "trials {}", self.trials).unwrap();
        writeln!(out, "operations {}", self.operations).unwrap();
        writeln!(out, "failures {}", self.failures).unwrap();
        writeln!(out, "closure_mismatches {}", self.closure_mismatches).unwrap();
        writeln!(out, "rebuild_mismatches {}", self.rebuild_mismatches).unwrap();
        writeln!(out, "invariant_violations {}", self.invariant_violations).unwrap();
        writeln!(out, "inverse_violations {}", self.inverse_violations).unwrap();
        if let Some(c) = &self.first_counterexample {
            writeln!(out, "counterexample trial {} step {}: {}", c.trial, c.step, c.reason).unwrap();
            writeln!(out, "merged_cycle {}", c.merged_cycle).unwrap();
            writeln!(out, "--- graph").unwrap();
            out.push_str(&c.graph);
            writeln!(out, "--- updates").unwrap();
            out.push_str(&c.updates);
        }
        out
    }
}

/// `n` nodes, `k` kinds, edge count drawn from `0..=2n` over distinct
/// canonical triples.
pub fn random_graph(rng: &mut impl Rng, n: usize, k: Kind) -> InputGraph {
    let mut g = InputGraph::new(n);
    let capacity = n * n * k as usize;
    let target = rng.gen_range(0..=2 * n).min(capacity);
    while g.edge_count() < target {
        let (u, i, v) = random_triple(rng, n, k);
        let _ = g.add_edge(u, Label::open(i), v);
    }
    g
}

fn random_triple(rng: &mut impl Rng, n: usize, k: Kind) -> (NodeId, Kind, NodeId) {
    (rng.gen_range(0..n), rng.gen_range(1..=k), rng.gen_range(0..n))
}

/// An insertion of an absent triple or a deletion of a present edge.
fn random_update(rng: &mut impl Rng, g: &InputGraph, k: Kind) -> Option<UpdateOp> {
    let n = g.node_count();
    let capacity = n * n * k as usize;
    let delete = g.edge_count() == capacity || (g.edge_count() > 0 && rng.gen_bool(0.5));
    if delete {
        if g.edge_count() == 0 {
            return None;
        }
        let e = g.edges().nth(rng.gen_range(0..g.edge_count())).unwrap();
        return Some(UpdateOp::Delete { u: e.src, label: Label::open(e.kind), v: e.dst });
    }
    loop {
        let (u, i, v) = random_triple(rng, n, k);
        if !g.has_edge(u, Label::open(i), v) {
            return Some(UpdateOp::Insert { u, label: Label::open(i), v });
        }
    }
}

fn apply(engine: &mut Engine, op: UpdateOp) {
    match op {
        UpdateOp::Insert { u, label, v } => {
            engine.insert_edge(u, label, v).expect("generated insertion is valid");
        }
        UpdateOp::Delete { u, label, v } => {
            engine.delete_edge(u, label, v).expect("generated deletion is valid");
        }
        _ => {}
    }
}

pub fn fuzz_verify(cfg: &FuzzConfig) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = FuzzReport { trials: cfg.trials, ..Default::default() };
    for trial in 0..cfg.trials {
        let n = rng.gen_range(1..=cfg.max_nodes);
        let k = rng.gen_range(1..=cfg.max_kind);
        let graph = random_graph(&mut rng, n, k);
        let op_count = rng.gen_range(1..=cfg.max_ops);
        let mut engine = Engine::new(graph.clone(), cfg.mode, Strategy::Dynamic);
        let mut stream: Vec<UpdateOp> = Vec::new();
        let mut failed = false;

        for _ in 0..op_count {
            let Some(op) = random_update(&mut rng, engine.graph(), k) else { continue };
            let merged_cycle = engine.merged().has_cycle();
            apply(&mut engine, op);
            stream.push(op);
            report.operations += 1;

            let mut reasons = Vec::new();
            let actual = engine.fingerprint();
            let closure = cfl_closure(engine.graph()).expect("fuzz graphs are within the oracle bound");
            if actual != closure {
                report.closure_mismatches += 1;
                reasons.push(format!(
                    "closure {} vs engine {}",
                    inline_fingerprint(&closure),
                    inline_fingerprint(&actual)
                ));
            }
            if actual != rebuild_partition(engine.graph()) {
                report.rebuild_mismatches += 1;
                reasons.push("rebuild mismatch".to_string());
            }
            if let Err(msg) = engine.check_invariants() {
                report.invariant_violations += 1;
                reasons.push(msg);
            }

            // insert then delete a fresh edge on a copy
            let mut probe_ops = Vec::new();
            let mut probe_cycle = false;
            if let Some(insert @ UpdateOp::Insert { u, label, v }) = random_insert(&mut rng, engine.graph(), k) {
                let mut probe = engine.clone();
                apply(&mut probe, insert);
                let cycle = probe.merged().has_cycle();
                apply(&mut probe, UpdateOp::Delete { u, label, v });
                if probe.fingerprint() != actual {
                    report.inverse_violations += 1;
                    if reasons.is_empty() {
                        probe_ops = vec![insert, UpdateOp::Delete { u, label, v }];
                        probe_cycle = cycle;
                    }
                    reasons.push(format!("insert/delete of {insert} changed the partition"));
                }
            }

            if !reasons.is_empty() && !failed {
                failed = true;
                report.failures += 1;
                if report.first_counterexample.is_none() {
                    let merged_cycle = if probe_ops.is_empty() { merged_cycle } else { probe_cycle };
                    let mut replay = stream.clone();
                    replay.extend(probe_ops);
                    let step = replay.len();
                    report.first_counterexample = Some(Counterexample {
                        trial,
                        step,
                        reason: reasons.join("; "),
                        graph: serialize_graph(&graph),
                        updates: serialize_updates(&replay),
                        merged_cycle,
                    });
                }
            }
        }
    }
    report
}

fn random_insert(rng: &mut impl Rng, g: &InputGraph, k: Kind) -> Option<UpdateOp> {
    let n = g.node_count();
    if g.edge_count() == n * n * k as usize {
        return None;
    }
    loop {
        let (u, i, v) = random_triple(rng, n, k);
        if !g.has_edge(u, Label::open(i), v) {
            return Some(UpdateOp::Insert { u, label: Label::open(i), v });
        }
    }
}
