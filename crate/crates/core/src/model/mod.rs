//! Instances, taxa sets, and the two primitive checks every solver relies on:
//! phylogenetic diversity and viability.

mod instance;
mod taxaset;
mod tree;
mod web;

pub use instance::{
    extend_to_size_k, is_certificate, is_viable, is_viable_within, pd, spanning_subtree_of_taxa,
    viability_certificate, Decision, Instance, NamedSolution, Solution,
};
pub use taxaset::TaxaSet;
pub use tree::PhyloTree;
pub use web::FoodWeb;
