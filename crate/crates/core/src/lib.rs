//! Exact solvers for optimizing phylogenetic diversity under food-web
//! dependencies (PDD) and its star-tree special case (s-PDD).
//!
//! The crate is organised by technique: [`model`] holds the data types,
//! [`preprocess`] the reduction rules, [`oracle`] the brute-force ground truth,
//! and the remaining modules the parameterized algorithms.

pub mod error;
pub mod model;

pub use error::{PddError, Result};
pub use model::{Decision, FoodWeb, Instance, PhyloTree, Solution, TaxaSet};
pub mod preprocess;
pub mod oracle;
pub mod colorcoding;
pub mod pattern;
pub mod diversity;
pub mod structural;
pub mod generators;
pub mod cli;
