//! Replaying an update stream against an engine, with optional per-update
//! verification.

use std::fmt::Write as _;
use std::path::PathBuf;

use dyck_core::oracle::DEFAULT_BOUND;
use dyck_core::{
    cfl_closure, parse_graph, parse_updates, rebuild_partition, CycleMode, Engine, Fingerprint,
    InputGraph, Strategy, UpdateOp,
};
use log::debug;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Verify {
    #[default]
    None,
    /// Compare against a from-scratch static solve.
    Rebuild,
    /// Compare against the brute-force closure.
    Oracle,
}

#[derive(Debug, Clone, Default)]
pub struct SessionConfig {
    pub graph_path: PathBuf,
    pub updates_path: Option<PathBuf>,
    pub mode: CycleMode,
    pub strategy: Strategy,
    pub verify: Verify,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    /// 1-based index among the updates of the stream.
    pub step: usize,
    pub line: usize,
    pub op: String,
    pub expected: Fingerprint,
    pub actual: Fingerprint,
    /// Set when the partition matched but an internal invariant did not.
    pub invariant: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionReport {
    /// What the stream asked to print, in order, followed by diagnostics.
    pub output: String,
    pub divergence: Option<Divergence>,
    pub error: Option<String>,
}

impl SessionReport {
    pub fn exit_code(&self) -> i32 {
        if self.divergence.is_none() && self.error.is_none() {
            0
        } else {
            1
        }
    }
}

pub fn inline_fingerprint(fp: &Fingerprint) -> String {
    let classes: Vec<String> = fp
        .iter()
        .map(|c| format!("[{}]", c.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")))
        .collect();
    classes.join(" ")
}

/// Reads both files and replays. I/O and parse problems end up in
/// `SessionReport::error`.
pub fn run_session(cfg: &SessionConfig) -> SessionReport {
    let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()));
    let graph_text = match read(&cfg.graph_path) {
        Ok(t) => t,
        Err(e) => return failed(String::new(), e),
    };
    let updates_text = match cfg.updates_path.as_ref().map(read).transpose() {
        Ok(t) => t.unwrap_or_default(),
        Err(e) => return failed(String::new(), e),
    };
    replay(&graph_text, &updates_text, cfg.mode, cfg.strategy, cfg.verify)
}

fn failed(output: String, error: String) -> SessionReport {
    SessionReport { output, divergence: None, error: Some(error) }
}

fn arbiter(g: &InputGraph, verify: Verify) -> Option<Fingerprint> {
    match verify {
        Verify::None => None,
        Verify::Rebuild => Some(rebuild_partition(g)),
        Verify::Oracle => Some(cfl_closure(g).expect("graph size checked before replay")),
    }
}

pub fn replay(
    graph_text: &str,
    updates_text: &str,
    mode: CycleMode,
    strategy: Strategy,
    verify: Verify,
) -> SessionReport {
    let mut output = String::new();
    let graph = match parse_graph(graph_text) {
        Ok(g) => g,
        Err(e) => return failed(output, format!("graph: {e}")),
    };
    let ops = match parse_updates(updates_text) {
        Ok(ops) => ops,
        Err(e) => return failed(output, format!("updates: {e}")),
    };
    if verify == Verify::Oracle && graph.node_count() > DEFAULT_BOUND {
        return failed(
            output,
            format!("verify=oracle needs at most {DEFAULT_BOUND} nodes, graph has {}", graph.node_count()),
        );
    }

    let mut engine = Engine::new(graph, mode, strategy);
    let mut step = 0;
    for (line, op) in ops {
        debug!("line {line}: {op}");
        let result = match op {
            UpdateOp::Insert { u, label, v } => engine.insert_edge(u, label, v).map(|_| true),
            UpdateOp::Delete { u, label, v } => engine.delete_edge(u, label, v).map(|r| {
                debug!("  path {:?}, cycle classes {:?}, {} splits, {} merges", r.path, r.cycle_classes, r.splits, r.merges);
                true
            }),
            UpdateOp::Query { a, b } => engine.query_reachable(a, b).map(|ans| {
                writeln!(output, "{ans}").unwrap();
                false
            }),
            UpdateOp::Classes => {
                output.push_str(&engine.classes_dump());
                Ok(false)
            }
            UpdateOp::MergedEdges => {
                output.push_str(&engine.medges_dump());
                Ok(false)
            }
        };
        let is_update = match result {
            Ok(u) => u,
            Err(e) => return failed(output, format!("updates line {line}: {e}")),
        };
        if !is_update {
            continue;
        }
        step += 1;
        let Some(expected) = arbiter(engine.graph(), verify) else { continue };
        let actual = engine.fingerprint();
        let invariant = engine.check_invariants().err();
        if expected != actual || invariant.is_some() {
            writeln!(output, "divergence at step {step} (line {line}: {op})").unwrap();
            writeln!(output, "  expected: {}", inline_fingerprint(&expected)).unwrap();
            writeln!(output, "  actual:   {}", inline_fingerprint(&actual)).unwrap();
            if let Some(msg) = &invariant {
                writeln!(output, "  invariant: {msg}").unwrap();
            }
            let divergence = Divergence { step, line, op: op.to_string(), expected, actual, invariant };
            return SessionReport { output, divergence: Some(divergence), error: None };
        }
    }
    SessionReport { output, divergence: None, error: None }
}
