//! Acceptance suite. Prints one `PASS`/`FAIL`/`INFO` line per criterion and
//! fails if any criterion failed.
//!
//!     cargo test -p dyck-cli --test acceptance -- --nocapture

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use dyck_cli::fuzz::random_graph;
use dyck_cli::{bench, fuzz_verify, replay, BenchConfig, Family, FuzzConfig, Verify};
use dyck_core::{
    opt_dyck, rebuild_partition, track_cycles, CycleMode, DeletionPath, Engine, InputGraph, Label,
    Strategy,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const U: usize = 0;
const V: usize = 1;
const W: usize = 2;
const X1: usize = 3;
const X2: usize = 4;
const Y1: usize = 5;
const Y2: usize = 6;

const FORK: &[(usize, u32, usize)] = &[(U, 1, W), (V, 1, W)];
const TWO_CYCLES: &[(usize, u32, usize)] =
    &[(U, 1, W), (V, 1, W), (V, 1, Y1), (Y1, 1, Y2), (Y2, 1, V), (U, 1, X1), (X1, 1, X2), (X2, 1, U)];
const TWO_CYCLES_TEXT: &str = "nodes 7\nedge 0 1 2\nedge 1 1 2\nedge 1 1 5\nedge 5 1 6\nedge 6 1 1\n\
                          edge 0 1 3\nedge 3 1 4\nedge 4 1 0\n";

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fork_static() -> Outcome {
    let g = InputGraph::from_edges(3, FORK).unwrap();
    let start = Instant::now();
    let gm = opt_dyck(&g);
    let elapsed = start.elapsed();
    let classes = gm.partition().fingerprint();
    let dump = gm.dump();
    check(
        classes == vec![vec![U, V], vec![W]] && dump == "medge 0 1 2 2\n" && elapsed < Duration::from_millis(1),
        format!("classes {classes:?}, edges {:?}, {elapsed:?}", dump.trim()),
    )
}

fn two_cycles_static() -> Outcome {
    let gm = opt_dyck(&InputGraph::from_edges(7, TWO_CYCLES).unwrap());
    let classes = gm.partition().fingerprint();
    let dump = gm.dump();
    let expected = "medge 0 1 2 2\nmedge 0 1 3 2\nmedge 3 1 4 2\nmedge 4 1 0 2\n";
    check(
        classes == vec![vec![U, V], vec![W], vec![X1, Y1], vec![X2, Y2]] && dump == expected,
        format!("classes {classes:?}, {} merged edges", gm.edge_count()),
    )
}

fn cut_extended_deletion() -> Outcome {
    let mut e = Engine::new(InputGraph::from_edges(7, TWO_CYCLES).unwrap(), CycleMode::On, Strategy::Dynamic);

    // the cycle set as seen right after the weight decrement
    let mut probe = e.merged().clone();
    let uv = probe.find(V).unwrap();
    let w = probe.find(W).unwrap();
    probe.adjust_weight(uv, 1, w, -1).unwrap();
    let mut cycle: Vec<Vec<usize>> = track_cycles(&probe, uv)
        .unwrap()
        .reps
        .iter()
        .map(|&r| {
            let mut m = probe.members(r).unwrap().to_vec();
            m.sort_unstable();
            m
        })
        .collect();
    cycle.sort();

    let report = e.delete_edge(V, Label::open(1), W).unwrap();
    let cut_edges: Vec<_> = TWO_CYCLES.iter().copied().filter(|&t| t != (V, 1, W)).collect();
    let mut expected_edges: Vec<(usize, u32, usize, u32)> = cut_edges.iter().map(|&(s, k, d)| (s, k, d, 1)).collect();
    expected_edges.sort_unstable();
    let edges = e.merged().named_edges();
    let singletons = e.fingerprint().len() == 7;
    check(
        cycle == vec![vec![U, V], vec![X1, Y1], vec![X2, Y2]]
            && report.path == DeletionPath::Cyclic
            && singletons
            && edges == expected_edges,
        format!("cycle set {cycle:?}, {} classes, {} merged edges", e.fingerprint().len(), edges.len()),
    )
}

fn cut_without_cycle_handling() -> Outcome {
    let mut e = Engine::new(InputGraph::from_edges(7, TWO_CYCLES).unwrap(), CycleMode::Off, Strategy::Dynamic);
    e.delete_edge(V, Label::open(1), W).unwrap();
    let stale = e.classes_dump() == "0 1\n2\n3 5\n4 6\n" && e.medges_dump().contains("medge 0 1 2 1\n");
    let session = replay(TWO_CYCLES_TEXT, "del 1 1 2\n", CycleMode::Off, Strategy::Dynamic, Verify::Rebuild);
    let caught = session.divergence.as_ref().is_some_and(|d| d.step == 1) && session.exit_code() == 1;
    check(stale && caught, format!("stale classes kept: {stale}, divergence reported: {caught}"))
}

fn fuzz_differential() -> Outcome {
    let start = Instant::now();
    let report = fuzz_verify(&FuzzConfig { seed: 1, trials: 1000, ..Default::default() });
    let elapsed = start.elapsed();
    check(
        report.failures == 0
            && report.closure_mismatches == 0
            && report.rebuild_mismatches == 0
            && elapsed < Duration::from_secs(60),
        format!(
            "{} trials, {} operations, {} failures, {:.1}s",
            report.trials,
            report.operations,
            report.failures,
            elapsed.as_secs_f64()
        ),
    )
}

fn invariants() -> Outcome {
    let report = fuzz_verify(&FuzzConfig { seed: 2, trials: 1000, ..Default::default() });
    check(
        report.invariant_violations == 0 && report.inverse_violations == 0,
        format!(
            "{} operations, {} invariant violations, {} inverse violations",
            report.operations, report.invariant_violations, report.inverse_violations
        ),
    )
}

/// Builds `edges` by inserting them one at a time in shuffled orders and
/// checks every order ends at the static solution.
fn confluent(n: usize, edges: &[(usize, u32, usize)], shuffles: usize, rng: &mut ChaCha8Rng) -> bool {
    let reference = opt_dyck(&InputGraph::from_edges(n, edges).unwrap());
    let mut order = edges.to_vec();
    (0..shuffles).all(|_| {
        order.shuffle(rng);
        let mut e = Engine::new(InputGraph::new(n), CycleMode::On, Strategy::Dynamic);
        for &(s, k, d) in &order {
            e.insert_edge(s, Label::open(k), d).unwrap();
        }
        e.fingerprint() == reference.partition().fingerprint() && e.medges_dump() == reference.dump()
    })
}

fn confluence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let hand = confluent(3, FORK, 20, &mut rng) && confluent(7, TWO_CYCLES, 20, &mut rng);
    let mut random_ok = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=10);
        let g = random_graph(&mut rng, n, 3);
        let edges: Vec<_> = g.edges().map(|e| (e.src, e.kind, e.dst)).collect();
        if confluent(n, &edges, 20, &mut rng) && rebuild_partition(&g) == opt_dyck(&g).partition().fingerprint() {
            random_ok += 1;
        }
    }
    check(hand && random_ok == 50, format!("hand examples: {hand}, random graphs: {random_ok}/50, 20 orders each"))
}

fn complexity_smoke() -> Outcome {
    let rows = bench(&BenchConfig {
        family: Family::Adversarial,
        min: 32,
        max: 256,
        ops: 2,
        strategies: vec![Strategy::Dynamic],
        ..Default::default()
    });
    let fit = rows[0].fit_exponent.unwrap_or(f64::NAN);
    check(fit <= 2.3, format!("adversarial deletion exponent {fit:.2} (bound 2.3)"))
}

fn chain_speed() -> Outcome {
    let rows = bench(&BenchConfig { family: Family::Chain, min: 2048, max: 2048, ops: 8, ..Default::default() });
    let (dynamic, rebuild) = (rows[0].per_op_us, rows[1].per_op_us);
    check(dynamic < rebuild, format!("chain n=2048: dynamic {dynamic:.0}us/op, rebuild {rebuild:.0}us/op"))
}

#[test]
fn acceptance() {
    // (name, check, counts toward the verdict)
    let criteria: [(&str, fn() -> Outcome, bool); 9] = [
        ("fork: static solve", fork_static, true),
        ("two cycles: static solve", two_cycles_static, true),
        ("two cycles: deletion splits the cycle", cut_extended_deletion, true),
        ("deletion without cycle handling is caught", cut_without_cycle_handling, true),
        ("differential fuzz vs closure and rebuild", fuzz_differential, true),
        ("recount, fixpoint and inverse invariants", invariants, true),
        ("confluence under insertion order", confluence, true),
        ("adversarial complexity (informational)", complexity_smoke, false),
        ("chain dynamic vs rebuild (informational)", chain_speed, false),
    ];
    let mut failed = Vec::new();
    for (name, run, required) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let tag = match (&outcome, required) {
            (Ok(_), _) => "PASS",
            (Err(_), true) => "FAIL",
            (Err(_), false) => "INFO",
        };
        let detail = outcome.as_ref().unwrap_or_else(|e| e);
        println!("{tag} {name}: {detail}");
        if tag == "FAIL" {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
