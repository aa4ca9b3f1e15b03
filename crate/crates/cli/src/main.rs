use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dyck_cli::{bench, fuzz_verify, render_csv, run_session, BenchConfig, Family, FuzzConfig, SessionConfig, Verify};
use dyck_core::{CycleMode, Strategy};

/// Dynamic bidirected Dyck-reachability.
///
/// Verbosity is controlled by the DYCK_LOG environment variable
/// (error, warn, info, debug, trace).
#[derive(Parser)]
#[command(name = "dyck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a graph statically and print its classes and merged edges.
    Build { graph: PathBuf },
    /// Solve a graph, then replay an update stream.
    Run {
        graph: PathBuf,
        #[arg(long)]
        updates: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Toggle::On)]
        mode: Toggle,
        #[arg(long, value_enum, default_value_t = StrategyArg::Dynamic)]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value_t = VerifyArg::None)]
        verify: VerifyArg,
    },
    /// Random graphs and update streams checked against both arbiters.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Toggle::On)]
        mode: Toggle,
    },
    /// Time deletions over doubling instance sizes; prints CSV.
    Bench {
        #[arg(long, default_value = "adversarial")]
        family: Family,
        #[arg(long, default_value_t = 64)]
        min: usize,
        #[arg(long, default_value_t = 1024)]
        max: usize,
        #[arg(long, default_value_t = 8)]
        ops: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Dynamic,
    Rebuild,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    None,
    Rebuild,
    Oracle,
}

fn mode(t: Toggle) -> CycleMode {
    match t {
        Toggle::On => CycleMode::On,
        Toggle::Off => CycleMode::Off,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DYCK_LOG", "warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Build { graph } => {
            let cfg = SessionConfig { graph_path: graph, ..Default::default() };
            finish(run_with_dumps(cfg))
        }
        Command::Run { graph, updates, mode: m, strategy, verify } => {
            let cfg = SessionConfig {
                graph_path: graph,
                updates_path: updates,
                mode: mode(m),
                strategy: match strategy {
                    StrategyArg::Dynamic => Strategy::Dynamic,
                    StrategyArg::Rebuild => Strategy::Rebuild,
                },
                verify: match verify {
                    VerifyArg::None => Verify::None,
                    VerifyArg::Rebuild => Verify::Rebuild,
                    VerifyArg::Oracle => Verify::Oracle,
                },
            };
            finish(run_session(&cfg))
        }
        Command::Fuzz { seed, trials, mode: m } => {
            let report = fuzz_verify(&FuzzConfig { seed, trials, mode: mode(m), ..Default::default() });
            print!("{}", report.render());
            if report.failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Bench { family, min, max, ops, seed } => {
            let rows = bench(&BenchConfig { family, min, max, ops, seed, ..Default::default() });
            print!("{}", render_csv(&rows));
            ExitCode::SUCCESS
        }
    }
}

/// `build`: a session with no updates whose stream just dumps the result.
fn run_with_dumps(cfg: SessionConfig) -> dyck_cli::SessionReport {
    match std::fs::read_to_string(&cfg.graph_path) {
        Ok(text) => dyck_cli::replay(&text, "classes\nmedges\n", cfg.mode, cfg.strategy, cfg.verify),
        Err(e) => dyck_cli::SessionReport {
            output: String::new(),
            divergence: None,
            error: Some(format!("{}: {e}", cfg.graph_path.display())),
        },
    }
}

fn finish(report: dyck_cli::SessionReport) -> ExitCode {
    print!("{}", report.output);
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    if report.exit_code() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
