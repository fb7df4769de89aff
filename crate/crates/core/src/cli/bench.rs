//! Batch runs over a directory of instance files.

use super::format::parse_document;
use super::portfolio::{portfolio_solve, Policy, RunRecord};
use crate::error::{PddError, Result};
use rayon::prelude::*;
use std::fmt::Write;
use std::path::{Path, PathBuf};

/// Worker count from `PDD_THREADS`; unset or unparsable means one.
pub fn thread_count() -> usize {
    std::env::var("PDD_THREADS").ok().and_then(|v| v.parse().ok()).filter(|&t| t > 0).unwrap_or(1)
}

/// Instance files in `dir`, sorted by name.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| PddError::Domain(format!("{}: {e}", dir.display()));
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

/// Solves every file of `dir` on `threads` workers; results keep file order.
pub fn bench_dir(dir: &Path, policy: &Policy, threads: usize) -> Result<Vec<(PathBuf, Result<RunRecord>)>> {
    let files = instance_files(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| PddError::Domain(e.to_string()))?;
    let run = |p: &PathBuf| {
        let text = std::fs::read_to_string(p).map_err(|e| PddError::Domain(format!("{}: {e}", p.display())));
        let rec = text.and_then(|t| parse_document(&t)).and_then(|inst| portfolio_solve(&inst, policy, false));
        (p.clone(), rec)
    };
    Ok(pool.install(|| files.par_iter().map(run).collect()))
}

/// Plain-text summary table.
pub fn render_table(rows: &[(PathBuf, Result<RunRecord>)]) -> String {
    let mut out = String::new();
    writeln!(out, "{:<32} {:<10} {:<9} {:>8} {:>10}", "file", "algorithm", "decision", "pd", "ms").unwrap();
    for (path, rec) in rows {
        let name = path.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
        match rec {
            Ok(r) => writeln!(
                out,
                "{:<32} {:<10} {:<9} {:>8} {:>10.2}",
                name,
                r.algorithm.id(),
                r.decision,
                r.pd_value.map_or("-".into(), |v| v.to_string()),
                r.wall_ms
            ),
            Err(e) => writeln!(out, "{name:<32} error: {e}"),
        }
        .unwrap();
    }
    out
}
