//! Deletion timing over instance families of doubling size.
//!
//! Each timed deletion is followed by an untimed re-insertion of the same
//! edge, so every operation of a size runs against the same instance.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use dyck_core::{CycleMode, EdgeRef, Engine, InputGraph, Label, Strategy};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Acyclic ladder of merged pairs above one anchor.
    Chain,
    /// One class on a merged-graph cycle with Θ(n) outgoing merged edges,
    /// each folding Θ(n) originals.
    Adversarial,
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::Adversarial => "adversarial",
            Family::Random => "random",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chain" => Ok(Family::Chain),
            "adversarial" => Ok(Family::Adversarial),
            "random" => Ok(Family::Random),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub family: Family,
    pub min: usize,
    pub max: usize,
    pub ops: usize,
    pub seed: u64,
    pub strategies: Vec<Strategy>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            family: Family::Adversarial,
            min: 64,
            max: 1024,
            ops: 8,
            seed: 1,
            strategies: vec![Strategy::Dynamic, Strategy::Rebuild],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub op_count: usize,
    pub total_ms: f64,
    pub per_op_us: f64,
    pub fit_exponent: Option<f64>,
}

pub const CSV_HEADER: &str = "family,n,op_count,total_ms,per_op_us,fit_exponent";

pub fn render_csv(rows: &[BenchRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        let fit = r.fit_exponent.map(|e| format!("{e:.3}")).unwrap_or_default();
        writeln!(out, "{},{},{},{:.3},{:.3},{}", r.family, r.n, r.op_count, r.total_ms, r.per_op_us, fit).unwrap();
    }
    out
}

/// Instance of `family` at size `n`, plus the edges whose deletion is timed.
pub fn instance(family: Family, n: usize, ops: usize, rng: &mut ChaCha8Rng) -> (InputGraph, Vec<EdgeRef>) {
    match family {
        Family::Chain => {
            // anchor 0; p_i = 2i+1, q_i = 2i+2
            let mut edges = vec![(1, 1, 0), (2, 1, 0)];
            for i in 1..n {
                edges.push((2 * i + 1, 1, 2 * i - 1));
                edges.push((2 * i + 2, 1, 2 * i));
            }
            let g = InputGraph::from_edges(2 * n + 1, &edges).unwrap();
            let targets = (0..ops)
                .map(|_| {
                    let i = rng.gen_range(0..n);
                    if i == 0 {
                        EdgeRef::new(1, 1, 0)
                    } else {
                        EdgeRef::new(2 * i + 1, 1, 2 * i - 1)
                    }
                })
                .collect();
            (g, targets)
        }
        Family::Adversarial => {
            // w = 0, u_i = 1+i, x_i = 1+n+i, y_i = 1+2n+i, t_j = 1+3n+j
            let (u, x, y, t) = (|i| 1 + i, |i| 1 + n + i, |i| 1 + 2 * n + i, |j| 1 + 3 * n + j);
            let mut edges = Vec::with_capacity(n * n + 4 * n);
            for i in 0..n {
                edges.push((u(i), 1, 0));
                edges.push((u(i), 1, x(i)));
                edges.push((x(i), 1, y(i)));
                edges.push((y(i), 1, u(i)));
                for j in 0..n {
                    edges.push((u(i), 2, t(j)));
                }
            }
            let g = InputGraph::from_edges(4 * n + 1, &edges).unwrap();
            let targets = (0..ops).map(|_| EdgeRef::new(u(rng.gen_range(0..n)), 1, 0)).collect();
            (g, targets)
        }
        Family::Random => {
            let mut g = InputGraph::new(n);
            while g.edge_count() < 2 * n {
                let _ = g.add_edge(rng.gen_range(0..n), Label::open(rng.gen_range(1..=3)), rng.gen_range(0..n));
            }
            let edges: Vec<EdgeRef> = g.edges().collect();
            let targets = (0..ops).map(|_| *edges.choose(rng).unwrap()).collect();
            (g, targets)
        }
    }
}

fn time_deletions(g: InputGraph, targets: &[EdgeRef], strategy: Strategy) -> Duration {
    let mut engine = Engine::new(g, CycleMode::On, strategy);
    let mut total = Duration::ZERO;
    for e in targets {
        let start = Instant::now();
        engine.delete_edge(e.src, Label::open(e.kind), e.dst).expect("target edge present");
        total += start.elapsed();
        engine.insert_edge(e.src, Label::open(e.kind), e.dst).expect("target edge absent");
    }
    total
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.max(1e-9).ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn sizes(min: usize, max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = min.max(1);
    while n <= max {
        out.push(n);
        n *= 2;
    }
    out
}

pub fn bench(cfg: &BenchConfig) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &strategy in &cfg.strategies {
        let label = match strategy {
            Strategy::Dynamic => format!("{}-dynamic", cfg.family.name()),
            Strategy::Rebuild => format!("{}-rebuild", cfg.family.name()),
        };
        let mut family_rows = Vec::new();
        for n in sizes(cfg.min, cfg.max) {
            // same instance and targets for every strategy
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ n as u64);
            let (g, targets) = instance(cfg.family, n, cfg.ops, &mut rng);
            let total = time_deletions(g, &targets, strategy);
            let total_ms = total.as_secs_f64() * 1e3;
            let per_op_us = if targets.is_empty() { 0.0 } else { total.as_secs_f64() * 1e6 / targets.len() as f64 };
            family_rows.push(BenchRow {
                family: label.clone(),
                n,
                op_count: targets.len(),
                total_ms,
                per_op_us,
                fit_exponent: None,
            });
        }
        let points: Vec<(f64, f64)> = family_rows.iter().map(|r| (r.n as f64, r.per_op_us)).collect();
        let fit = fit_exponent(&points);
        for r in &mut family_rows {
            r.fit_exponent = fit;
        }
        rows.extend(family_rows);
    }
    rows
}
