//! PDD parameterized by the diversity threshold `D`.
//!
//! Every unit of edge weight is a position in `[W]`, `W = PD(X)`, and a
//! coloring `f: [W] -> [D]` turns each edge into a set of colors. A set of taxa
//! whose edges cover all `D` colors has diversity at least `D`, and a perfect
//! family of colorings certifies the converse. A second coloring of the taxa
//! with `k` colors keeps solutions small and their parts disjoint.

use crate::colorcoding::{build_perfect_hash_family, CcConfig, Mode};
use crate::error::{precondition, refuse, Result};
use crate::model::{Decision, Instance, PhyloTree, TaxaSet};
use crate::preprocess::{rr_heavy_edge_accept, rr_reachability_prune};
use rayon::prelude::*;

/// Largest threshold the bitmask tables accept.
pub const MAX_D: u64 = 63;
/// Largest taxon palette accepted (one more color is used internally).
pub const MAX_TAXON_COLORS: usize = 20;

/// Color sets of edges and taxa derived from the prefix weights of the edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColorAssignment {
    d: u64,
    /// Edge heads in preorder: `edges[j-1]` is edge `e_j`.
    edges: Vec<usize>,
    /// `prefix[j] = W_j`.
    prefix: Vec<u64>,
    /// Bitmask of `c(e)` indexed by head vertex; bit `i` is color `i + 1`.
    edge_colors: Vec<u64>,
    /// Union of the edge colors on the root path of each taxon.
    taxon_edge_colors: Vec<u64>,
    taxon_color: Vec<u32>,
}

impl EdgeColorAssignment {
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn total(&self) -> u64 {
        *self.prefix.last().unwrap_or(&0)
    }

    /// Color mask of the edge entering `v`.
    pub fn edge_colors(&self, v: usize) -> u64 {
        self.edge_colors[v]
    }

    /// Color mask `c(x)` of a taxon.
    pub fn taxon_edge_colors(&self, x: usize) -> u64 {
        self.taxon_edge_colors[x]
    }

    /// The taxon coloring `ĉ(x)`.
    pub fn taxon_color(&self, x: usize) -> u32 {
        self.taxon_color[x]
    }

    pub fn set_colors(&self, set: &TaxaSet) -> u64 {
        set.iter().fold(0, |m, x| m | self.taxon_edge_colors[x])
    }
}

/// Colors edge `e_j` with `{f(W_{j-1}+1), …, f(W_j)}` and taxon `x` with `g(x)`.
///
/// `f` has one entry per weight unit (`W` entries, colors `1..=d`) and `g`
/// one per taxon (colors from 1).
pub fn build_edge_color_assignment(tree: &PhyloTree, d: u64, f: &[u32], g: &[u32]) -> Result<EdgeColorAssignment> {
    if d > MAX_D {
        return refuse(format!("threshold {d} exceeds the supported maximum {MAX_D}"));
    }
    if f.len() as u64 != tree.total_weight() {
        return precondition(format!("f must have {} entries, found {}", tree.total_weight(), f.len()));
    }
    if f.iter().any(|&c| c == 0 || c as u64 > d) {
        return precondition(format!("f must map into 1..={d}"));
    }
    if g.len() != tree.num_taxa() || g.iter().any(|&c| c == 0) {
        return precondition("g must give every taxon a color from 1");
    }
    let edges: Vec<usize> = tree.edges().collect();
    let mut prefix = vec![0u64];
    let mut edge_colors = vec![0u64; tree.num_vertices()];
    for &v in &edges {
        let lo = *prefix.last().unwrap();
        let hi = lo + tree.weight(v);
        edge_colors[v] = (lo..hi).fold(0, |m, p| m | 1 << (f[p as usize] - 1));
        prefix.push(hi);
    }
    let mut path = vec![0u64; tree.num_vertices()];
    for &v in tree.preorder() {
        if let Some(p) = tree.parent(v) {
            path[v] = path[p] | edge_colors[v];
        }
    }
    let taxon_edge_colors = (0..tree.num_taxa()).map(|x| path[tree.taxon_vertex(x)]).collect();
    Ok(EdgeColorAssignment { d, edges, prefix, edge_colors, taxon_edge_colors, taxon_color: g.to_vec() })
}

#[derive(Clone, Copy)]
struct Entry {
    mask: u64,
    // Colors handed to the predator merged at this step, and the entries combined.
    part: u32,
    left: u32,
    right: u32,
}

/// Keeps only masks not contained in another mask of the list.
fn insert_maximal(list: &mut Vec<Entry>, e: Entry) {
    if list.iter().any(|o| o.mask & e.mask == e.mask) {
        return;
    }
    list.retain(|o| o.mask & e.mask != o.mask);
    list.push(e);
}

struct Tables {
    // steps[x][s][C]: entries after merging the first s predators of x.
    steps: Vec<Vec<Vec<Vec<Entry>>>>,
    preds: Vec<Vec<usize>>,
}

impl Tables {
    fn final_layer(&self, x: usize) -> &Vec<Vec<Entry>> {
        self.steps[x].last().unwrap()
    }

    fn collect(&self, x: usize, cset: u32, idx: usize, out: &mut Vec<usize>) {
        out.push(x);
        let (mut c, mut i) = (cset, idx);
        for s in (1..self.steps[x].len()).rev() {
            let e = self.steps[x][s][c as usize][i];
            if e.part != 0 {
                let y = self.preds[x][s - 1];
                self.collect(y, e.part, e.right as usize, out);
            }
            c &= !e.part;
            i = e.left as usize;
        }
    }
}

/// Decides whether a viable set with colorful taxon colors covers all `D`
/// edge colors. The sources of the web hang below a virtual source with no
/// edge colors, so no single-source transform is needed.
pub fn solve_d_colored_pdd(inst: &Instance, asg: &EdgeColorAssignment) -> Result<Decision> {
    if asg.d != inst.d {
        return precondition("assignment was built for a different threshold");
    }
    if asg.taxon_color.len() != inst.n() || asg.edge_colors.len() != inst.tree.num_vertices() {
        return precondition("assignment does not match the instance");
    }
    if inst.d == 0 {
        return Ok(Decision::Yes(inst.solution(inst.empty_set())));
    }
    let n = inst.n();
    let palette = asg.taxon_color.iter().copied().max().unwrap_or(0) as usize;
    if palette > MAX_TAXON_COLORS {
        return precondition(format!("taxon palette must be at most {MAX_TAXON_COLORS}"));
    }
    // Vertex n is the virtual source; it takes the extra color palette + 1.
    let full = 1usize << (palette + 1);
    let target = (1u64 << asg.d) - 1;
    let mut preds: Vec<Vec<usize>> = (0..n).map(|x| inst.web.pred(x).to_vec()).collect();
    preds.push(inst.web.sources());
    let mut order: Vec<usize> = inst.web.topological_order().iter().rev().copied().collect();
    order.push(n);
    let mut tables = Tables { steps: vec![Vec::new(); n + 1], preds };
    for &x in &order {
        let (own, own_mask) = if x == n {
            (1u32 << palette, 0)
        } else {
            (1u32 << (asg.taxon_color[x] - 1), asg.taxon_edge_colors[x])
        };
        let mut layer: Vec<Vec<Entry>> = vec![Vec::new(); full];
        layer[own as usize].push(Entry { mask: own_mask, part: 0, left: 0, right: 0 });
        let mut steps = vec![layer.clone()];
        for &y in &tables.preds[x] {
            let dy = tables.final_layer(y);
            let mut next: Vec<Vec<Entry>> = vec![Vec::new(); full];
            for c in 0..full as u32 {
                if c & own == 0 {
                    continue;
                }
                let rest = c & !own;
                let mut z = rest;
                loop {
                    let lefts = &layer[(c & !z) as usize];
                    if z == 0 {
                        for (li, l) in lefts.iter().enumerate() {
                            let e = Entry { mask: l.mask, part: 0, left: li as u32, right: 0 };
                            insert_maximal(&mut next[c as usize], e);
                        }
                        break;
                    }
                    for (li, l) in lefts.iter().enumerate() {
                        for (ri, r) in dy[z as usize].iter().enumerate() {
                            let e = Entry { mask: l.mask | r.mask, part: z, left: li as u32, right: ri as u32 };
                            insert_maximal(&mut next[c as usize], e);
                        }
                    }
                    z = (z - 1) & rest;
                }
            }
            layer = next;
            steps.push(layer.clone());
        }
        tables.steps[x] = steps;
    }
    let top = tables.final_layer(n);
    for c in 0..full {
        if let Some(i) = top[c].iter().position(|e| e.mask & target == target) {
            let mut taxa = Vec::new();
            tables.collect(n, c as u32, i, &mut taxa);
            let set = TaxaSet::from_ids(n, taxa.into_iter().filter(|&t| t != n));
            if inst.check(&set) {
                return Ok(Decision::Yes(inst.solution(set)));
            }
        }
    }
    Ok(Decision::No)
}

/// PDD in time exponential in `D + k`.
pub fn solve_pdd_by_d(inst: &Instance, cfg: &CcConfig) -> Result<Decision> {
    if inst.d == 0 {
        return Ok(Decision::Yes(inst.solution(inst.empty_set())));
    }
    if inst.k == 0 {
        return Ok(Decision::No);
    }
    let pruned = rr_reachability_prune(inst);
    let work = &pruned.instance;
    let w = work.tree.total_weight();
    if work.n() == 0 || inst.d > w {
        return Ok(Decision::No);
    }
    if let Some(sol) = rr_heavy_edge_accept(work)? {
        return Ok(Decision::Yes(inst.solution(pruned.lift(&sol.taxa))));
    }
    if inst.d > MAX_D {
        return refuse(format!("threshold {} exceeds the supported maximum {MAX_D}", inst.d));
    }
    let half = match cfg.mode {
        Mode::Exact => *cfg,
        Mode::MonteCarlo => CcConfig { epsilon: cfg.epsilon / 2.0, ..*cfg },
    };
    let fam_d = build_perfect_hash_family(w as usize, inst.d as usize, &half)?;
    let colors = work.k.min(work.n());
    let fam_k = build_perfect_hash_family(work.n(), colors, &CcConfig { seed: cfg.seed ^ 0x9e37, ..half })?;
    let grid: Vec<(usize, usize)> = (0..fam_d.functions.len())
        .flat_map(|a| (0..fam_k.functions.len()).map(move |b| (a, b)))
        .collect();
    let found = grid
        .par_iter()
        .map(|&(a, b)| {
            let asg = build_edge_color_assignment(&work.tree, work.d, &fam_d.functions[a], &fam_k.functions[b])?;
            solve_d_colored_pdd(work, &asg)
        })
        .find_map_first(|r| match r {
            Ok(Decision::Yes(s)) => Some(Ok(s)),
            Ok(Decision::No) => None,
            Err(e) => Some(Err(e)),
        });
    match found {
        Some(r) => {
            let set = pruned.lift(&r?.taxa);
            Ok(Decision::Yes(inst.solution(set)))
        }
        None => Ok(Decision::No),
    }
}
