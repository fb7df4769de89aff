//! Color coding: perfect hash families, universal sets, and the k-colored
//! dynamic program for star trees.

mod family;
mod kcolored;

pub use family::{
    build_perfect_hash_family, build_universal_set, is_perfect, is_universal, monte_carlo_trials, MC_CELL_LIMIT,
    Exactness, HashFamily, UniversalSet,
};
pub use kcolored::{k_colored_table, solve_k_colored_spdd, solve_spdd_by_k, KColoredTable, MAX_COLORS};

/// Exact (certified) or monte-carlo family construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    #[serde(rename = "mc")]
    MonteCarlo,
}

/// Settings shared by all color-coding based solvers.
#[derive(Clone, Copy, Debug)]
pub struct CcConfig {
    pub mode: Mode,
    pub seed: u64,
    /// One-sided failure bound in monte-carlo mode.
    pub epsilon: f64,
    /// Largest number of subsets an exact family may have to certify.
    pub exact_budget: u64,
}

impl Default for CcConfig {
    fn default() -> Self {
        CcConfig { mode: Mode::Exact, seed: 0, epsilon: 0.1, exact_budget: 1_000_000 }
    }
}

impl CcConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn monte_carlo(seed: u64, epsilon: f64) -> Self {
        CcConfig { mode: Mode::MonteCarlo, seed, epsilon, ..Self::default() }
    }
}

/// A total coloring of the taxa with colors `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexColoring {
    pub colors: Vec<u32>,
}
