//! Instance normalization: the single-source transform and the three
//! reduction rules applied ahead of every solver.

use crate::error::{precondition, PddError, Result};
use crate::model::{FoodWeb, Instance, PhyloTree, Solution, TaxaSet};
use std::collections::VecDeque;

/// An instance derived from another, with a map back to the original taxa.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub instance: Instance,
    /// `back[new id] = original id`.
    pub back: Vec<usize>,
    pub original_n: usize,
}

impl Reduced {
    pub fn identity(inst: &Instance) -> Reduced {
        Reduced { instance: inst.clone(), back: (0..inst.n()).collect(), original_n: inst.n() }
    }

    /// Maps a set in reduced coordinates to original coordinates.
    pub fn lift(&self, set: &TaxaSet) -> TaxaSet {
        set.map(self.original_n, |t| self.back[t])
    }

    /// Composes `self` (original -> mid) with `next` (mid -> new).
    pub fn then(&self, next: Reduced) -> Reduced {
        let back = next.back.iter().map(|&m| self.back[m]).collect();
        Reduced { instance: next.instance, back, original_n: self.original_n }
    }

    pub fn removed(&self) -> Vec<usize> {
        let kept = TaxaSet::from_ids(self.original_n, self.back.iter().copied());
        (0..self.original_n).filter(|&t| !kept.contains(t)).collect()
    }
}

/// Result of the single-source transform.
#[derive(Clone, Debug)]
pub struct StarTransform {
    pub instance: Instance,
    /// Id of the added source taxon; original taxa keep their ids.
    pub star: usize,
    /// Tree vertex of the added taxon.
    pub star_vertex: usize,
}

impl StarTransform {
    /// Drops the added taxon and returns the set in original coordinates.
    pub fn strip(&self, set: &TaxaSet) -> TaxaSet {
        TaxaSet::from_ids(self.star, set.iter().filter(|&t| t != self.star))
    }

    /// Adds the star taxon to an original-coordinate set.
    pub fn embed(&self, set: &TaxaSet) -> TaxaSet {
        let mut s = set.map(self.star + 1, |t| t);
        s.insert(self.star);
        s
    }
}

/// Summary of what preprocessing did to an instance.
#[derive(Clone, Debug, Default)]
pub struct PreprocessReport {
    pub removed_taxa: Vec<usize>,
    pub removed_arcs: Vec<(usize, usize)>,
    pub single_source: bool,
    /// Present only when preprocessing alone decided "yes"; in original ids.
    pub early_yes: Option<Solution>,
    pub back: Vec<usize>,
}

/// Adds a new source taxon preying on nothing and eaten by every old source,
/// hung below the root with weight `D+1`; sets `k' = k+1` and `D' = 2D+1`.
pub fn single_source_transform(inst: &Instance) -> Result<StarTransform> {
    let overflow = || PddError::Overflow("threshold too large for the single-source transform".into());
    let w_star = inst.d.checked_add(1).ok_or_else(overflow)?;
    let d2 = inst.d.checked_mul(2).and_then(|x| x.checked_add(1)).ok_or_else(overflow)?;
    let n = inst.n();
    let t = &inst.tree;
    let nv = t.num_vertices();
    let mut parent: Vec<Option<usize>> = (0..nv).map(|v| t.parent(v)).collect();
    let mut weight: Vec<u64> = (0..nv).map(|v| t.weight(v)).collect();
    let mut names: Vec<String> = (0..nv).map(|v| t.name(v).to_string()).collect();
    let mut taxa: Vec<Option<usize>> = (0..nv).map(|v| t.vertex_taxon(v)).collect();
    let mut star_name = "*".to_string();
    while names.contains(&star_name) {
        star_name.push('*');
    }
    parent.push(Some(t.root()));
    weight.push(w_star);
    names.push(star_name);
    taxa.push(Some(n));
    let tree = PhyloTree::from_parts(parent, weight, names, taxa)?;
    let mut arcs = inst.web.arcs();
    arcs.extend(inst.web.sources().into_iter().map(|s| (n, s)));
    let web = FoodWeb::new(n + 1, &arcs)?;
    Ok(StarTransform {
        instance: Instance::new(tree, web, inst.k + 1, d2)?,
        star: n,
        star_vertex: nv,
    })
}

/// Unweighted distance from the nearest source along arcs; `None` if unreachable.
pub fn source_distances(web: &FoodWeb) -> Vec<Option<usize>> {
    let n = web.num_taxa();
    let mut dist = vec![None; n];
    let mut queue = VecDeque::new();
    for s in web.sources() {
        dist[s] = Some(0);
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].unwrap();
        for &w in web.pred(v) {
            if dist[w].is_none() {
                dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Removes every taxon at distance at least `k` from all sources. One pass is
/// exhaustive because surviving taxa keep their shortest source paths.
pub fn rr_reachability_prune(inst: &Instance) -> Reduced {
    let dist = source_distances(&inst.web);
    let keep = TaxaSet::from_ids(
        inst.n(),
        (0..inst.n()).filter(|&x| dist[x].is_some_and(|d| d < inst.k)),
    );
    if keep.len() == inst.n() {
        return Reduced::identity(inst);
    }
    let (instance, back) = inst.restrict(&keep);
    Reduced { instance, back, original_n: inst.n() }
}

/// Accepts when a single edge already meets the threshold, returning a
/// shortest source path to an offspring of that edge as witness.
///
/// Only sound after [`rr_reachability_prune`]; an instance that still has a
/// taxon at distance `k` or more is rejected.
pub fn rr_heavy_edge_accept(inst: &Instance) -> Result<Option<Solution>> {
    let dist = source_distances(&inst.web);
    if dist.iter().any(|d| d.map_or(true, |d| d >= inst.k)) {
        return precondition("heavy-edge rule requires the reachability prune first");
    }
    if inst.d == 0 {
        return Ok(Some(inst.solution(inst.empty_set())));
    }
    let t = &inst.tree;
    let heavy = t.edges().find(|&v| t.weight(v) >= inst.d);
    let Some(v) = heavy else { return Ok(None) };
    let x = t.offspring(v).iter().next().expect("every edge has an offspring");
    let mut set = inst.empty_set();
    let mut cur = x;
    set.insert(cur);
    while let Some(d) = dist[cur].filter(|&d| d > 0) {
        cur = *inst
            .web
            .prey(cur)
            .iter()
            .find(|&&p| dist[p] == Some(d - 1))
            .expect("BFS layer has a predecessor");
        set.insert(cur);
    }
    Ok(Some(inst.solution(set)))
}

/// Removes arcs `v -> w` from non-sources `v` whenever every prey of `v` also
/// feeds `w`, until no such arc remains. Returns the new instance and the
/// removed arcs.
pub fn rr_redundant_prey(inst: &Instance) -> (Instance, Vec<(usize, usize)>) {
    let n = inst.n();
    let mut arcs: Vec<(usize, usize)> = inst.web.arcs();
    let mut removed = Vec::new();
    loop {
        let web = FoodWeb::new(n, &arcs).expect("arc removal keeps acyclicity");
        let hit = (0..n).filter(|&v| !web.is_source(v)).find_map(|v| {
            web.pred(v)
                .iter()
                .find(|&&w| web.prey(v).iter().all(|&u| web.has_arc(u, w)))
                .map(|&w| (v, w))
        });
        match hit {
            Some(arc) => {
                arcs.retain(|&a| a != arc);
                removed.push(arc);
            }
            None => {
                let out = Instance { web, ..inst.clone() };
                return (out, removed);
            }
        }
    }
}

/// Standard pipeline: reachability prune, then the heavy-edge rule.
pub fn standard_pipeline(inst: &Instance) -> (Reduced, PreprocessReport) {
    let red = rr_reachability_prune(inst);
    let mut report = PreprocessReport {
        removed_taxa: red.removed(),
        back: red.back.clone(),
        ..Default::default()
    };
    if let Ok(Some(sol)) = rr_heavy_edge_accept(&red.instance) {
        let lifted = red.lift(&sol.taxa);
        report.early_yes = Some(inst.solution(lifted));
    }
    (red, report)
}
