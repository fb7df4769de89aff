use super::{build_perfect_hash_family, CcConfig, VertexColoring};
use crate::error::{precondition, Result};
use crate::model::{Decision, Instance, TaxaSet};
use crate::preprocess::{rr_reachability_prune, single_source_transform};

/// Largest palette the subset tables accept.
pub const MAX_COLORS: usize = 24;

/// The filled tables of the k-colored star DP.
///
/// `value(x, C)` is the best diversity of a colorful set `S` with color set
/// exactly `C` that is viable within the taxa reachable from `x`. Such a set is
/// either empty (then `C` is empty) or contains `x`.
pub struct KColoredTable {
    colors: usize,
    best: Vec<Vec<Option<u64>>>,
    // choice[x][p][C]: colors given to the p-th predator's part when the
    // first p+1 predators of x are merged into color set C.
    choice: Vec<Vec<Vec<u32>>>,
    preds: Vec<Vec<usize>>,
    color_of: Vec<u32>,
}

impl KColoredTable {
    pub fn value(&self, x: usize, colors: u32) -> Option<u64> {
        self.best[x][colors as usize]
    }

    pub fn num_colors(&self) -> usize {
        self.colors
    }

    /// Rebuilds a set attaining `value(x, colors)`.
    pub fn witness(&self, x: usize, colors: u32, n: usize) -> Option<TaxaSet> {
        self.value(x, colors)?;
        let mut out = TaxaSet::new(n);
        self.collect(x, colors, &mut out);
        Some(out)
    }

    fn collect(&self, x: usize, colors: u32, out: &mut TaxaSet) {
        if colors == 0 {
            return;
        }
        out.insert(x);
        let mut c = colors;
        for p in (0..self.preds[x].len()).rev() {
            let part = self.choice[x][p][c as usize];
            self.collect(self.preds[x][p], part, out);
            c &= !part;
        }
        debug_assert_eq!(c, 1 << (self.color_of[x] - 1));
    }
}

/// Fills the k-colored DP for a star instance with a single source.
pub fn k_colored_table(inst: &Instance, coloring: &VertexColoring) -> Result<KColoredTable> {
    if !inst.tree.is_star() {
        return precondition("k-colored dynamic program needs a star tree");
    }
    let sources = inst.web.sources();
    if sources.len() != 1 {
        return precondition(format!(
            "k-colored dynamic program needs exactly one source, found {}",
            sources.len()
        ));
    }
    let n = inst.n();
    if coloring.colors.len() != n {
        return precondition("coloring is not total on the taxa");
    }
    let colors = coloring.colors.iter().copied().max().unwrap_or(0) as usize;
    if colors > MAX_COLORS || coloring.colors.iter().any(|&c| c == 0) {
        return precondition(format!("palette must be 1..={MAX_COLORS}"));
    }
    let full = 1usize << colors;
    let t = &inst.tree;
    let mut best: Vec<Vec<Option<u64>>> = vec![Vec::new(); n];
    let mut choice: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    let preds: Vec<Vec<usize>> = (0..n).map(|x| inst.web.pred(x).to_vec()).collect();
    for &x in inst.web.topological_order().iter().rev() {
        let own = 1u32 << (coloring.colors[x] - 1);
        let mut layer: Vec<Option<u64>> = vec![None; full];
        layer[own as usize] = Some(t.weight(t.taxon_vertex(x)));
        let mut steps = Vec::with_capacity(preds[x].len());
        for &y in &preds[x] {
            let dy = &best[y];
            let mut next: Vec<Option<u64>> = vec![None; full];
            let mut pick = vec![0u32; full];
            for c in 0..full as u32 {
                if c & own == 0 {
                    continue;
                }
                let rest = c & !own;
                // Enumerate the part Z' of the remaining colors taken by y.
                let mut z = rest;
                loop {
                    if let (Some(a), Some(b)) = (layer[(c & !z) as usize], dy[z as usize]) {
                        if next[c as usize].map_or(true, |v| a + b > v) {
                            next[c as usize] = Some(a + b);
                            pick[c as usize] = z;
                        }
                    }
                    if z == 0 {
                        break;
                    }
                    z = (z - 1) & rest;
                }
            }
            layer = next;
            steps.push(pick);
        }
        layer[0] = Some(0);
        best[x] = layer;
        choice[x] = steps;
    }
    Ok(KColoredTable { colors, best, choice, preds, color_of: coloring.colors.clone() })
}

/// Best colorful viable set of at most `k` taxa; `None` if only the empty
/// set qualifies.
pub fn solve_k_colored_spdd(
    inst: &Instance,
    coloring: &VertexColoring,
) -> Result<Option<crate::model::Solution>> {
    let table = k_colored_table(inst, coloring)?;
    let source = inst.web.sources()[0];
    let mut best: Option<(u64, u32)> = None;
    for c in 1..(1u32 << table.colors) {
        if c.count_ones() as usize > inst.k {
            continue;
        }
        if let Some(v) = table.value(source, c) {
            if best.map_or(true, |(b, _)| v > b) {
                best = Some((v, c));
            }
        }
    }
    Ok(best.map(|(_, c)| {
        let set = table.witness(source, c, inst.n()).expect("reachable entry");
        inst.solution(set)
    }))
}

/// s-PDD by color coding over the budget `k`.
pub fn solve_spdd_by_k(inst: &Instance, cfg: &CcConfig) -> Result<Decision> {
    if !inst.tree.is_star() {
        return precondition("color coding over k needs a star tree");
    }
    if inst.d == 0 {
        return Ok(Decision::Yes(inst.solution(inst.empty_set())));
    }
    if inst.k == 0 {
        return Ok(Decision::No);
    }
    let pruned = rr_reachability_prune(inst);
    let star = single_source_transform(&pruned.instance)?;
    let work = &star.instance;
    let colors = work.k.min(work.n());
    let family = build_perfect_hash_family(work.n(), colors, cfg)?;
    for f in &family.functions {
        let coloring = VertexColoring { colors: f.clone() };
        if let Some(sol) = solve_k_colored_spdd(work, &coloring)? {
            if sol.pd_value >= work.d {
                let set = pruned.lift(&star.strip(&sol.taxa));
                if inst.check(&set) {
                    return Ok(Decision::Yes(inst.solution(set)));
                }
            }
        }
    }
    Ok(Decision::No)
}
