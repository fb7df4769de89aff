//! PDD parameterized by `k̄ = n - k` when every taxon has at most one prey.
//!
//! A trace of a universal set colors taxa 1 (must survive) or 0 (may die).
//! Under a coloring, the dying taxa split into blocks that die together:
//! maximal color-0 subtrees glued by color-0 components of the web. Choosing
//! which blocks die is a knapsack problem that pays lost diversity and earns
//! dead taxa.

use crate::colorcoding::{build_universal_set, CcConfig};
use crate::error::{precondition, Result};
use crate::model::{Decision, Instance, Solution, TaxaSet};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnapsackItem {
    pub cost: u64,
    pub value: u64,
}

/// Items with total cost at most `budget` and total value at least `demand`,
/// or `None`. Exact dynamic program over the value, capped at `demand`.
pub fn knapsack_decide(items: &[KnapsackItem], budget: u64, demand: u64) -> Option<Vec<usize>> {
    if demand == 0 {
        return Some(Vec::new());
    }
    let d = demand as usize;
    // best[i][v]: least cost reaching value min(demand, v) with the first i items.
    let mut best = vec![vec![u64::MAX; d + 1]; items.len() + 1];
    best[0][0] = 0;
    for (i, it) in items.iter().enumerate() {
        for v in 0..=d {
            let skip = best[i][v];
            best[i + 1][v] = best[i + 1][v].min(skip);
            if skip != u64::MAX {
                let nv = (v as u64 + it.value).min(demand) as usize;
                let c = skip.saturating_add(it.cost);
                if c < best[i + 1][nv] {
                    best[i + 1][nv] = c;
                }
            }
        }
    }
    if best[items.len()][d] > budget {
        return None;
    }
    let mut picked = Vec::new();
    let mut v = d;
    for i in (0..items.len()).rev() {
        let target = best[i + 1][v];
        if best[i][v] == target {
            continue;
        }
        let it = items[i];
        let prev = (0..=v).find(|&u| {
            best[i][u] != u64::MAX
                && (u as u64 + it.value).min(demand) as usize == v
                && best[i][u].saturating_add(it.cost) == target
        });
        let u = prev.expect("knapsack entry has a witness");
        picked.push(i);
        v = u;
    }
    picked.reverse();
    Some(picked)
}

/// Blocks of taxa that die together under a coloring, with their knapsack items.
pub struct ExtinctionBlocks {
    pub blocks: Vec<TaxaSet>,
    pub items: Vec<KnapsackItem>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Builds the knapsack items for the coloring `survive` (color 1).
pub fn extinction_blocks(inst: &Instance, survive: &TaxaSet) -> ExtinctionBlocks {
    let t = &inst.tree;
    let web = &inst.web;
    let n = inst.n();
    // Heads v of edges uv with off(v) all color 0 and a color-1 taxon in off(u).
    let heads: Vec<usize> = t
        .edges()
        .filter(|&v| {
            let u = t.parent(v).unwrap();
            !t.offspring(v).intersects(survive) && t.offspring(u).intersects(survive)
        })
        .collect();
    let mut head_of = vec![usize::MAX; n];
    for (i, &v) in heads.iter().enumerate() {
        for x in t.offspring(v).iter() {
            head_of[x] = i;
        }
    }
    let mut uf: Vec<usize> = (0..heads.len()).collect();
    for (x, y) in web.arcs() {
        if survive.contains(x) || survive.contains(y) {
            continue;
        }
        if head_of[x] != usize::MAX && head_of[y] != usize::MAX {
            let (a, b) = (find(&mut uf, head_of[x]), find(&mut uf, head_of[y]));
            uf[a] = b;
        }
    }
    // A block that feeds a color-1 taxon, directly or transitively, is dropped.
    let mut doomed_reach = vec![false; heads.len()];
    let mut feeds_survivor = vec![false; n];
    for &x in web.topological_order().iter().rev() {
        feeds_survivor[x] = web.pred(x).iter().any(|&y| survive.contains(y) || feeds_survivor[y]);
    }
    // lost[v]: weight of the edge into v plus all edges below it.
    let mut lost = vec![0u64; t.num_vertices()];
    for &v in t.preorder().iter().rev() {
        lost[v] += t.weight(v);
        if let Some(p) = t.parent(v) {
            lost[p] += lost[v];
        }
    }
    let mut block_of_root: Vec<usize> = vec![usize::MAX; heads.len()];
    let mut blocks: Vec<TaxaSet> = Vec::new();
    let mut items: Vec<KnapsackItem> = Vec::new();
    for (i, &v) in heads.iter().enumerate() {
        let r = find(&mut uf, i);
        if t.offspring(v).iter().any(|x| feeds_survivor[x]) {
            doomed_reach[r] = true;
        }
        if block_of_root[r] == usize::MAX {
            block_of_root[r] = blocks.len();
            blocks.push(TaxaSet::new(n));
            items.push(KnapsackItem { cost: 0, value: 0 });
        }
        let b = block_of_root[r];
        blocks[b].union_with(t.offspring(v));
        items[b].cost += lost[v];
        items[b].value += t.offspring(v).len() as u64;
    }
    let keep: Vec<usize> = (0..heads.len())
        .filter(|&i| find(&mut uf, i) == i && !doomed_reach[i])
        .map(|i| block_of_root[i])
        .collect();
    ExtinctionBlocks {
        blocks: keep.iter().map(|&b| blocks[b].clone()).collect(),
        items: keep.iter().map(|&b| items[b]).collect(),
    }
}

/// Solves the two-colored problem for one coloring.
pub fn solve_two_colored(inst: &Instance, survive: &TaxaSet) -> Option<Solution> {
    let eb = extinction_blocks(inst, survive);
    let budget = inst.tree.total_weight().checked_sub(inst.d)?;
    let picked = knapsack_decide(&eb.items, budget, inst.kbar() as u64)?;
    let mut dead = inst.empty_set();
    for i in picked {
        dead.union_with(&eb.blocks[i]);
    }
    let alive = TaxaSet::full(inst.n()).difference(&dead);
    Some(inst.solution(alive)).filter(|s| inst.check(&s.taxa))
}

/// PDD on out-forest food-webs by universal-set traces over `3·k̄` taxa.
pub fn solve_pdd_outforest_by_kbar(inst: &Instance, cfg: &CcConfig) -> Result<Decision> {
    if (0..inst.n()).any(|x| inst.web.prey(x).len() > 1) {
        return precondition("out-forest solver needs every taxon to have at most one prey");
    }
    let n = inst.n();
    let all = TaxaSet::full(n);
    if inst.k >= n {
        return Ok(if inst.check(&all) { Decision::Yes(inst.solution(all)) } else { Decision::No });
    }
    if inst.k == 0 || n == 0 {
        let empty = inst.empty_set();
        return Ok(if inst.check(&empty) { Decision::Yes(inst.solution(empty)) } else { Decision::No });
    }
    let t = (3 * inst.kbar()).min(n);
    let family = build_universal_set(n, t, cfg)?;
    let found = family.sets.par_iter().find_map_first(|a| solve_two_colored(inst, a));
    Ok(found.map_or(Decision::No, Decision::Yes))
}
