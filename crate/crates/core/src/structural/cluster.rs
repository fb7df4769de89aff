//! s-PDD parameterized by the distance of the food-web to a cluster graph.
//!
//! For a fixed guess `Z = S ∩ Y` the taxa outside `Y` are scanned clique by
//! clique. Within a clique every arc points forward in topological order, so
//! a chosen taxon is fed by any earlier chosen taxon of its clique; only the
//! first one needs a source status or a prey in `Z`. The state records the
//! number of taxa taken and which members of `Z` already have a prey.

use super::modulator::{validate_modulator, GraphClass, Modulator};
use crate::error::{precondition, refuse, Result};
use crate::model::{Decision, Instance, Solution, TaxaSet};
use rayon::prelude::*;

/// Largest modulator whose subsets are enumerated.
pub const MAX_MODULATOR: usize = 20;

const NONE: u32 = u32::MAX;

fn leaf_weight(inst: &Instance, x: usize) -> u64 {
    inst.tree.weight(inst.tree.taxon_vertex(x))
}

/// Best solution `S` with `S ∩ Y = Z` for the modulator `Y`, or `None`.
pub fn solve_spdd_cluster_fixed_z(inst: &Instance, y: &TaxaSet, z: &TaxaSet) -> Result<Option<Solution>> {
    if !inst.tree.is_star() {
        return precondition("cluster solver needs a star tree");
    }
    let m = validate_modulator(&inst.web, y, GraphClass::Cluster)?;
    if !z.is_subset(y) {
        return precondition("Z must be a subset of the modulator");
    }
    if m.size() > MAX_MODULATOR {
        return refuse(format!("modulator of size {} exceeds {MAX_MODULATOR}", m.size()));
    }
    Ok(fixed_z(inst, &m, z))
}

fn fixed_z(inst: &Instance, m: &Modulator, z: &TaxaSet) -> Option<Solution> {
    let web = &inst.web;
    let zl: Vec<usize> = z.iter().collect();
    if zl.len() > inst.k {
        return None;
    }
    let budget = inst.k - zl.len();
    let bits = zl.len();
    let mut need = 0usize;
    for (j, &v) in zl.iter().enumerate() {
        if !web.is_source(v) && !web.prey(v).iter().any(|&p| z.contains(p)) {
            need |= 1 << j;
        }
    }
    let feeds = |x: usize| -> usize {
        zl.iter().enumerate().filter(|(_, &v)| web.has_arc(x, v)).fold(0, |a, (j, _)| a | 1 << j)
    };
    let fed_from_outside = |x: usize| web.is_source(x) || web.prey(x).iter().any(|&p| z.contains(p));

    let masks = 1usize << bits;
    let width = 2 * (budget + 1) * masks;
    let idx = |flag: usize, c: usize, mask: usize| ((flag * (budget + 1) + c) << bits) | mask;
    let mut cur: Vec<Option<u64>> = vec![None; width];
    cur[idx(0, 0, 0)] = Some(0);
    // Per step: for every state the previous state and the taxon taken, if any.
    let mut steps: Vec<(Option<usize>, Vec<u32>)> = Vec::new();
    for part in &m.parts {
        let mut next = vec![None; width];
        let mut back = vec![NONE; width];
        for flag in 0..2 {
            for c in 0..=budget {
                for mask in 0..masks {
                    let from = idx(flag, c, mask);
                    let to = idx(0, c, mask);
                    if cur[from] > next[to] {
                        next[to] = cur[from];
                        back[to] = from as u32;
                    }
                }
            }
        }
        steps.push((None, back));
        cur = next;
        for &x in part {
            let mut next = cur.clone();
            let mut back: Vec<u32> = (0..width as u32).collect();
            let (w, f, ext) = (leaf_weight(inst, x), feeds(x), fed_from_outside(x));
            for flag in 0..2 {
                if flag == 0 && !ext {
                    continue;
                }
                for c in 0..budget {
                    for mask in 0..masks {
                        let from = idx(flag, c, mask);
                        let Some(v) = cur[from] else { continue };
                        let to = idx(1, c + 1, mask | f);
                        if next[to].map_or(true, |o| v + w > o) {
                            next[to] = Some(v + w);
                            back[to] = from as u32;
                        }
                    }
                }
            }
            steps.push((Some(x), back));
            cur = next;
        }
    }
    let mut best: Option<(u64, usize)> = None;
    for (s, v) in cur.iter().enumerate() {
        if let Some(v) = *v {
            if s & need == need && best.map_or(true, |(b, _)| v > b) {
                best = Some((v, s));
            }
        }
    }
    let (_, mut state) = best?;
    let mut set = z.clone();
    for (taxon, back) in steps.iter().rev() {
        let prev = back[state] as usize;
        if let Some(x) = taxon {
            if prev != state {
                set.insert(*x);
            }
        }
        state = prev;
    }
    debug_assert!(inst.with_params(inst.k, 0).check(&set));
    Some(inst.solution(set))
}

/// Iterates over the guesses `Z ⊆ Y` that are not ruled out by a member of
/// `Z` whose prey all lie in `Y \ Z`.
fn guesses(inst: &Instance, m: &Modulator) -> Vec<TaxaSet> {
    let yl: Vec<usize> = m.deletion.iter().collect();
    (0u64..1 << yl.len())
        .map(|mask| TaxaSet::from_ids(inst.n(), (0..yl.len()).filter(|i| mask >> i & 1 == 1).map(|i| yl[i])))
        .filter(|z| {
            z.iter().all(|v| {
                inst.web.is_source(v)
                    || inst.web.prey(v).iter().any(|&p| !m.deletion.contains(p) || z.contains(p))
            })
        })
        .collect()
}

fn checked(inst: &Instance, y: &TaxaSet) -> Result<Modulator> {
    if !inst.tree.is_star() {
        return precondition("cluster solver needs a star tree");
    }
    let m = validate_modulator(&inst.web, y, GraphClass::Cluster)?;
    if m.size() > MAX_MODULATOR {
        return refuse(format!("modulator of size {} exceeds {MAX_MODULATOR}", m.size()));
    }
    Ok(m)
}

/// Maximum diversity solution over all guesses `Z ⊆ Y`.
pub fn best_by_cluster_modulator(inst: &Instance, y: &TaxaSet) -> Result<Solution> {
    let m = checked(inst, y)?;
    let best = guesses(inst, &m)
        .par_iter()
        .filter_map(|z| fixed_z(inst, &m, z))
        .reduce_with(|a, b| if b.pd_value > a.pd_value { b } else { a });
    Ok(best.unwrap_or_else(|| inst.solution(inst.empty_set())))
}

/// s-PDD given a cluster modulator `Y` of the food-web.
pub fn solve_spdd_by_cluster_modulator(inst: &Instance, y: &TaxaSet) -> Result<Decision> {
    let m = checked(inst, y)?;
    if inst.d == 0 {
        return Ok(Decision::Yes(inst.solution(inst.empty_set())));
    }
    let found = guesses(inst, &m)
        .par_iter()
        .find_map_first(|z| fixed_z(inst, &m, z).filter(|s| s.pd_value >= inst.d));
    Ok(found.map_or(Decision::No, Decision::Yes))
}
