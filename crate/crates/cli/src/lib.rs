//! Session replay, fuzzing and benchmarking on top of `dyck-core`.

pub mod bench;
pub mod fuzz;
pub mod session;

pub use bench::{bench, render_csv, BenchConfig, BenchRow, Family};
pub use fuzz::{fuzz_verify, Counterexample, FuzzConfig, FuzzReport};
pub use session::{replay, run_session, Divergence, SessionConfig, SessionReport, Verify};
