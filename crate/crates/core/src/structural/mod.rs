//! Algorithms parameterized by the structure of the food-web.

mod cluster;
mod cocluster;
mod decomposition;
mod flow;
mod hitting_set;
mod modulator;
mod outforest;
mod treewidth;

pub use cluster::{best_by_cluster_modulator, solve_spdd_by_cluster_modulator, solve_spdd_cluster_fixed_z};
pub use cocluster::{best_by_cocluster_modulator, solve_pdd_by_cocluster_modulator};
pub use decomposition::{
    build_nice_tree_decomposition, from_elimination_order, parse_decomposition, write_decomposition, NiceNode,
    NiceTreeDecomposition, NodeKind,
};
pub use flow::{
    best_by_source_separating_flow, is_feasible_flow, is_isolated_arcs, is_source_separating, min_cost_flow,
    solve_pdd_source_separating_flow, FlowArc, FlowNetwork, FlowResult,
};
pub use hitting_set::{best_hitting_set, solve_hitting_set_tree_profits, HittingSetTreeProfits, MAX_FAMILY};
pub use modulator::{find_modulator, validate_modulator, GraphClass, Modulator};
pub use outforest::{
    extinction_blocks, knapsack_decide, solve_pdd_outforest_by_kbar, solve_two_colored, ExtinctionBlocks,
    KnapsackItem,
};
pub use treewidth::{
    best_by_treewidth, join_outcome, solve_spdd_by_treewidth, treewidth_table, Label, TreewidthTable, TW_BUDGET,
};
