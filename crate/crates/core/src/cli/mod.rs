//! Instance I/O, solver portfolio, and the command implementations behind the
//! `pdd` binary.

pub mod bench;
pub mod format;
pub mod portfolio;

pub use bench::{bench_dir, render_table, thread_count};
pub use format::{parse_document, parse_instance, parse_newick, write_document, write_newick};
pub use portfolio::{
    analyze, estimate, plan, portfolio_solve, run_decision, run_optimum, verify, Algorithm, Analysis, Parameters,
    Policy, RunRecord, VerifyReport,
};
