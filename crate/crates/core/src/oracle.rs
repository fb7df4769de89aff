//! Exhaustive ground truth. Every specialized solver is tested against these
//! functions, so they are kept deliberately plain.

use crate::error::{refuse, Result};
use crate::model::{is_viable, Decision, FoodWeb, Instance, Solution, TaxaSet};
use itertools::Itertools;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Binomial coefficient saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Viable subsets of exactly `size` taxa, in lexicographic order of their ids.
pub fn enumerate_viable_sets(web: &FoodWeb, size: usize) -> impl Iterator<Item = TaxaSet> {
    let mut out = Vec::new();
    grow(web, size, &mut |s| {
        out.push(s.clone());
        false
    });
    out.sort_by_key(|s| s.to_vec());
    out.into_iter()
}

/// Visits every viable set of exactly `size` taxa once. Taxa are decided in
/// topological order and a taxon is only taken when it is a source or one of
/// its prey was already taken. `visit` returns true to stop early.
fn grow(web: &FoodWeb, size: usize, visit: &mut dyn FnMut(&TaxaSet) -> bool) -> bool {
    let order = web.topological_order().to_vec();
    let mut set = TaxaSet::new(web.num_taxa());
    fn rec(
        web: &FoodWeb,
        order: &[usize],
        i: usize,
        left: usize,
        set: &mut TaxaSet,
        visit: &mut dyn FnMut(&TaxaSet) -> bool,
    ) -> bool {
        if left == 0 {
            return visit(set);
        }
        if order.len() - i < left {
            return false;
        }
        let x = order[i];
        if web.is_source(x) || web.prey(x).iter().any(|&p| set.contains(p)) {
            set.insert(x);
            if rec(web, order, i + 1, left - 1, set, visit) {
                return true;
            }
            set.remove(x);
        }
        rec(web, order, i + 1, left, set, visit)
    }
    if size > order.len() {
        return false;
    }
    rec(web, &order, 0, size, &mut set, visit)
}

/// Calls `visit` on every viable set of size `min(k, n)`, enumerating
/// survivors or victims, whichever is cheaper.
fn scan(inst: &Instance, budget: u64, visit: &mut dyn FnMut(&TaxaSet) -> bool) -> Result<()> {
    let n = inst.n();
    let k = inst.k.min(n);
    let kbar = n - k;
    let cost = binomial(n, k.min(kbar));
    if cost > budget {
        return refuse(format!("oracle would enumerate {cost} subsets (budget {budget})"));
    }
    if k <= kbar {
        grow(&inst.web, k, visit);
    } else {
        for victims in (0..n).combinations(kbar) {
            let mut s = TaxaSet::full(n);
            for v in victims {
                s.remove(v);
            }
            if is_viable(&inst.web, &s) && visit(&s) {
                break;
            }
        }
    }
    Ok(())
}

/// Exists-query: a viable set of at most `k` taxa with diversity at least `D`.
pub fn brute_force_decide(inst: &Instance) -> Result<Decision> {
    brute_force_decide_with_budget(inst, DEFAULT_BUDGET)
}

pub fn brute_force_decide_with_budget(inst: &Instance, budget: u64) -> Result<Decision> {
    let mut found = None;
    scan(inst, budget, &mut |s| {
        if inst.tree.diversity(s) >= inst.d {
            found = Some(s.clone());
            true
        } else {
            false
        }
    })?;
    Ok(match found {
        Some(s) => Decision::Yes(inst.solution(s)),
        None => Decision::No,
    })
}

/// Maximum diversity of a viable set of at most `k` taxa, with a witness.
pub fn brute_force_optimum(inst: &Instance) -> Result<Solution> {
    brute_force_optimum_with_budget(inst, DEFAULT_BUDGET)
}

pub fn brute_force_optimum_with_budget(inst: &Instance, budget: u64) -> Result<Solution> {
    let mut best: Option<(u64, TaxaSet)> = None;
    scan(inst, budget, &mut |s| {
        let v = inst.tree.diversity(s);
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, s.clone()));
        }
        false
    })?;
    let (_, set) = best.expect("a viable set of every size up to n exists");
    Ok(inst.solution(set))
}
