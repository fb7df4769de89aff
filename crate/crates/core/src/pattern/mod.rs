//! PDD parameterized by `k · height`: colored pattern trees, the pattern
//! reduction rules, and the enumeration driver that ends in the star DP.

mod rules;
mod solver;
mod tree;

pub use rules::{
    apply_pattern_rules, rr_contract_internal, rr_contract_internal_at, rr_pattern_edge_original,
    rr_pattern_edge_required, rr_restrict_food_web, ColoredInstance,
};
pub use solver::{respects_pattern, solve_pdd_by_k_height, solve_pdd_pattern};
pub use tree::{enumerate_labeled_rooted_trees, LabeledRootedTrees, PatternTree, PATTERN_TREE_BUDGET};
