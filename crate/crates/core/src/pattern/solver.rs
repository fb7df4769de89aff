use super::{enumerate_labeled_rooted_trees, rr_contract_internal, ColoredInstance, PatternTree};
use crate::colorcoding::{build_perfect_hash_family, solve_k_colored_spdd, CcConfig, VertexColoring};
use crate::error::{precondition, Result};
use crate::model::{Decision, Instance, PhyloTree, TaxaSet};
use crate::preprocess::{rr_reachability_prune, single_source_transform};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashSet};

/// Whether the spanning tree of `set ∪ {root}` is colorful and has the same
/// vertex colors and edge color pairs as `pattern`.
pub fn respects_pattern(tree: &PhyloTree, colors: &[u32], set: &TaxaSet, pattern: &PatternTree) -> bool {
    let mut verts = vec![tree.root()];
    verts.extend(set.iter().map(|t| tree.taxon_vertex(t)));
    let (span, _) = tree.spanning_subtree(&verts).expect("nonempty vertex list");
    let vc: Vec<u32> = span.iter().map(|&v| colors[v]).collect();
    let distinct: HashSet<u32> = vc.iter().copied().collect();
    if distinct.len() != vc.len() || !pattern.is_colorful() {
        return false;
    }
    let inside: HashSet<usize> = span.iter().copied().collect();
    let pairs: HashSet<(u32, u32)> = span
        .iter()
        .filter_map(|&v| tree.parent(v).filter(|p| inside.contains(p)).map(|p| (colors[p], colors[v])))
        .collect();
    distinct == pattern.colors().iter().copied().collect() && pairs == pattern.color_pairs()
}

/// Decides whether a set of at most `k` taxa with diversity at least `D`
/// exists whose spanning tree matches `pattern` under the vertex coloring.
///
/// A "yes" always carries a verified witness, which is colorful on its taxa
/// but not necessarily pattern-matching; every pattern-matching solution
/// leads to "yes".
pub fn solve_pdd_pattern(inst: &Instance, pattern: &PatternTree, coloring: &[u32]) -> Result<Decision> {
    let t = &inst.tree;
    if coloring.len() != t.num_vertices() {
        return precondition("vertex coloring must cover every tree vertex");
    }
    if coloring[t.root()] != pattern.root_color() {
        return Ok(Decision::No);
    }
    let present: HashSet<u32> = coloring.iter().copied().collect();
    if pattern.colors().iter().any(|c| !present.contains(c)) {
        return Ok(Decision::No);
    }
    if pattern.len() == 1 {
        return Ok(if inst.d == 0 { Decision::Yes(inst.solution(inst.empty_set())) } else { Decision::No });
    }
    if pattern.num_leaves() > inst.k || pattern.height() > t.height() {
        return Ok(Decision::No);
    }
    let ci = ColoredInstance::new(inst, coloring.to_vec())?;
    let (red, _) = rr_contract_internal(&ci, pattern)?;
    let work = &red.instance;
    if work.n() == 0 {
        return Ok(Decision::No);
    }
    debug_assert!(work.tree.is_star());
    let star = single_source_transform(work)?;
    // Taxa keep their vertex colors, compacted; the added source gets a fresh one.
    let palette: BTreeSet<u32> = (0..work.n()).map(|x| red.colors[work.tree.taxon_vertex(x)]).collect();
    let rank = |c: u32| palette.range(..c).count() as u32 + 1;
    let mut colors: Vec<u32> = (0..work.n()).map(|x| rank(red.colors[work.tree.taxon_vertex(x)])).collect();
    colors.push(palette.len() as u32 + 1);
    let Some(sol) = solve_k_colored_spdd(&star.instance, &VertexColoring { colors })? else {
        return Ok(Decision::No);
    };
    if sol.pd_value < star.instance.d {
        return Ok(Decision::No);
    }
    let set = red.lift(&star.strip(&sol.taxa));
    Ok(if inst.check(&set) { Decision::Yes(inst.solution(set)) } else { Decision::No })
}

/// PDD by enumerating colored patterns of every size up to `k · height + 1`.
pub fn solve_pdd_by_k_height(inst: &Instance, cfg: &CcConfig) -> Result<Decision> {
    if inst.d == 0 {
        return Ok(Decision::Yes(inst.solution(inst.empty_set())));
    }
    if inst.k == 0 {
        return Ok(Decision::No);
    }
    let pruned = rr_reachability_prune(inst);
    let work = &pruned.instance;
    if work.n() == 0 {
        return Ok(Decision::No);
    }
    let h = work.tree.height();
    let nv = work.tree.num_vertices();
    let limit = (work.k.saturating_mul(h) + 1).min(nv);
    // Fail fast before spending time on the smaller sizes.
    enumerate_labeled_rooted_trees(limit)?;
    let root = work.tree.root();
    for i in 2..=limit {
        let family = build_perfect_hash_family(nv, i, cfg)?;
        let mut by_root: Vec<Vec<PatternTree>> = vec![Vec::new(); i + 1];
        for p in enumerate_labeled_rooted_trees(i)? {
            if p.height() <= h && p.num_leaves() <= work.k {
                by_root[p.root_color() as usize].push(p);
            }
        }
        for f in &family.functions {
            let found = by_root[f[root] as usize]
                .par_iter()
                .map(|p| solve_pdd_pattern(work, p, f))
                .find_map_first(|r| match r {
                    Ok(Decision::Yes(s)) => Some(Ok(s)),
                    Ok(Decision::No) => None,
                    Err(e) => Some(Err(e)),
                });
            if let Some(r) = found {
                let set = pruned.lift(&r?.taxa);
                debug_assert!(inst.check(&set));
                return Ok(Decision::Yes(inst.solution(set)));
            }
        }
    }
    Ok(Decision::No)
}
