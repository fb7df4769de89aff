//! PDD parameterized by the distance of the food-web to a co-cluster graph.
//!
//! `F - Y` is complete multipartite. Guess `Z = S ∩ Y`, the first chosen taxon
//! `x_i` outside `Y` and the first chosen taxon `x_j` outside the part of
//! `x_i`. Every later taxon outside `Y` is adjacent to `x_i` or `x_j` and comes
//! after both, so it is fed. Taxa of the part of `x_i` chosen between the two
//! must be fed by `Z`. What is left is a hitting set problem: every member of
//! `Z` without prey so far needs a prey among the remaining choices.

use super::hitting_set::{best_hitting_set, HittingSetTreeProfits, MAX_FAMILY};
use super::modulator::{validate_modulator, GraphClass, Modulator};
use crate::error::{refuse, Result};
use crate::model::{Decision, Instance, Solution, TaxaSet};
use rayon::prelude::*;

pub const MAX_MODULATOR: usize = MAX_FAMILY;

struct Context<'a> {
    inst: &'a Instance,
    m: &'a Modulator,
    part: Vec<usize>,
}

impl Context<'_> {
    /// Completes `base` with a best hitting selection from `universe` of at
    /// most `k'` taxa. `None` if some member of `Z` cannot be fed.
    fn complete(&self, z: &TaxaSet, base: &TaxaSet, universe: TaxaSet, kp: usize) -> Result<Option<Solution>> {
        let inst = self.inst;
        let web = &inst.web;
        let mut family = Vec::new();
        for v in z.iter() {
            if web.is_source(v) || web.prey(v).iter().any(|&p| base.contains(p)) {
                continue;
            }
            let w = TaxaSet::from_ids(inst.n(), web.prey(v).iter().copied().filter(|&p| universe.contains(p)));
            if w.is_empty() {
                return Ok(None);
            }
            family.push(w);
        }
        let t = &inst.tree;
        let weights = (0..t.num_vertices())
            .map(|v| if t.offspring(v).intersects(base) { 0 } else { t.weight(v) })
            .collect();
        let hs = HittingSetTreeProfits::with_weights(t.clone(), weights, universe, family, kp, 0)?;
        Ok(best_hitting_set(&hs)?.map(|(_, extra)| inst.solution(base.union(&extra))))
    }

    /// Best solution with `S ∩ Y = Z`; stops early once `stop_at` is reached.
    fn best_for_z(&self, z: &TaxaSet, stop_at: Option<u64>) -> Result<Option<Solution>> {
        let inst = self.inst;
        let (web, y, n) = (&inst.web, &self.m.deletion, inst.n());
        if z.len() > inst.k {
            return Ok(None);
        }
        let mut best: Option<Solution> = None;
        let offer = |s: Option<Solution>, best: &mut Option<Solution>| {
            if let Some(s) = s {
                debug_assert!(inst.with_params(inst.k, 0).check(&s.taxa));
                if best.as_ref().map_or(true, |b| s.pd_value > b.pd_value) {
                    *best = Some(s);
                }
            }
            matches!((best.as_ref(), stop_at), (Some(b), Some(d)) if b.pd_value >= d)
        };
        let fed_by_z: Vec<bool> =
            (0..n).map(|x| web.is_source(x) || web.prey(x).iter().any(|&p| z.contains(p))).collect();
        let rz = |x: usize| !y.contains(x) && fed_by_z[x];
        // Nothing chosen outside Y.
        if offer(self.complete(z, z, TaxaSet::new(n), 0)?, &mut best) {
            return Ok(best);
        }
        let kz = inst.k - z.len();
        // Everything chosen outside Y lies in one part and is fed by Z.
        for part in &self.m.parts {
            let universe = TaxaSet::from_ids(n, part.iter().copied().filter(|&x| rz(x)));
            if !universe.is_empty() && offer(self.complete(z, z, universe, kz)?, &mut best) {
                return Ok(best);
            }
        }
        if kz < 2 {
            return Ok(best);
        }
        let order = web.topological_order();
        for (a, &xi) in order.iter().enumerate() {
            if !rz(xi) {
                continue;
            }
            for (b, &xj) in order.iter().enumerate().skip(a + 1) {
                if y.contains(xj) || self.part[xj] == self.part[xi] {
                    continue;
                }
                let mut base = z.clone();
                base.insert(xi);
                base.insert(xj);
                let between = order[a + 1..b].iter().copied().filter(|&x| self.part[x] == self.part[xi] && rz(x));
                let after = order[b + 1..].iter().copied().filter(|&x| !y.contains(x));
                let universe = TaxaSet::from_ids(n, between.chain(after));
                if offer(self.complete(z, &base, universe, kz - 2)?, &mut best) {
                    return Ok(best);
                }
            }
        }
        Ok(best)
    }
}

fn context<'a>(inst: &'a Instance, m: &'a Modulator) -> Context<'a> {
    let n = inst.n();
    let mut part = vec![usize::MAX; n];
    for (i, p) in m.parts.iter().enumerate() {
        for &x in p {
            part[x] = i;
        }
    }
    Context { inst, m, part }
}

fn checked(inst: &Instance, y: &TaxaSet) -> Result<Modulator> {
    let m = validate_modulator(&inst.web, y, GraphClass::CoCluster)?;
    if m.size() > MAX_MODULATOR {
        return refuse(format!("modulator of size {} exceeds {MAX_MODULATOR}", m.size()));
    }
    Ok(m)
}

fn subsets(y: &TaxaSet) -> Vec<TaxaSet> {
    let yl: Vec<usize> = y.iter().collect();
    (0u64..1 << yl.len())
        .map(|mask| TaxaSet::from_ids(y.capacity(), (0..yl.len()).filter(|i| mask >> i & 1 == 1).map(|i| yl[i])))
        .collect()
}

/// Maximum diversity solution given a co-cluster modulator `Y`.
pub fn best_by_cocluster_modulator(inst: &Instance, y: &TaxaSet) -> Result<Solution> {
    let m = checked(inst, y)?;
    let ctx = context(inst, &m);
    let all: Vec<Option<Solution>> =
        subsets(y).par_iter().map(|z| ctx.best_for_z(z, None)).collect::<Result<_>>()?;
    Ok(all
        .into_iter()
        .flatten()
        .fold(inst.solution(inst.empty_set()), |a, b| if b.pd_value > a.pd_value { b } else { a }))
}

/// PDD given a co-cluster modulator `Y` of the food-web.
pub fn solve_pdd_by_cocluster_modulator(inst: &Instance, y: &TaxaSet) -> Result<Decision> {
    let m = checked(inst, y)?;
    if inst.d == 0 {
        return Ok(Decision::Yes(inst.solution(inst.empty_set())));
    }
    let ctx = context(inst, &m);
    let found = subsets(y).par_iter().find_map_first(|z| match ctx.best_for_z(z, Some(inst.d)) {
        Ok(Some(s)) if s.pd_value >= inst.d => Some(Ok(s)),
        Ok(_) => None,
        Err(e) => Some(Err(e)),
    });
    match found {
        Some(r) => {
            let s = r?;
            debug_assert!(inst.check(&s.taxa));
            Ok(Decision::Yes(s))
        }
        None => Ok(Decision::No),
    }
}
