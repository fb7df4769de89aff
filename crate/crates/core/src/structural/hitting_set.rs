//! Hitting Set with Tree-Profits: pick at most `k` leaves of a weighted tree
//! that hit every member of a family and span diversity at least `D`.

use crate::error::{precondition, refuse, Result};
use crate::model::{PhyloTree, TaxaSet};

/// Largest family handled by the `3^|W|` subset tables.
pub const MAX_FAMILY: usize = 16;

#[derive(Clone, Debug)]
pub struct HittingSetTreeProfits {
    pub tree: PhyloTree,
    /// Edge weights by head vertex; may contain zeros.
    pub weights: Vec<u64>,
    /// Taxa that may be selected.
    pub universe: TaxaSet,
    pub family: Vec<TaxaSet>,
    pub k: usize,
    pub d: u64,
}

impl HittingSetTreeProfits {
    /// Uses the tree's own weights.
    pub fn new(tree: PhyloTree, universe: TaxaSet, family: Vec<TaxaSet>, k: usize, d: u64) -> Result<Self> {
        let weights = (0..tree.num_vertices()).map(|v| tree.weight(v)).collect();
        Self::with_weights(tree, weights, universe, family, k, d)
    }

    pub fn with_weights(
        tree: PhyloTree,
        weights: Vec<u64>,
        universe: TaxaSet,
        family: Vec<TaxaSet>,
        k: usize,
        d: u64,
    ) -> Result<Self> {
        let n = tree.num_taxa();
        if weights.len() != tree.num_vertices() {
            return precondition("one weight per tree vertex is required");
        }
        if universe.capacity() != n || family.iter().any(|w| w.capacity() != n) {
            return precondition("universe and family must range over the tree's taxa");
        }
        for (i, w) in family.iter().enumerate() {
            if w.is_empty() || !w.is_subset(&universe) {
                return precondition(format!("family member {i} must be a nonempty subset of the universe"));
            }
        }
        Ok(HittingSetTreeProfits { tree, weights, universe, family, k, d })
    }

    /// Diversity of a set under the instance weights.
    pub fn profit(&self, set: &TaxaSet) -> u64 {
        let t = &self.tree;
        let mut seen = vec![false; t.num_vertices()];
        let mut sum = 0;
        for x in set.iter() {
            let mut v = t.taxon_vertex(x);
            while v != t.root() && !seen[v] {
                seen[v] = true;
                sum += self.weights[v];
                v = t.parent(v).unwrap();
            }
        }
        sum
    }
}

type Table = Vec<Vec<Option<u64>>>;

/// `3^|W|`-style merge: `out[s][M]` is the best `a[s1][M1] + b[s - s1][M \ M1]`.
/// Tables are upward closed in `M`: an entry bounds sets hitting at least `M`.
fn merge(a: &Table, b: &Table, k: usize, full: usize) -> Table {
    let mut out = vec![vec![None; full]; k + 1];
    for s in 0..=k {
        for mask in 0..full {
            let mut best: Option<u64> = None;
            for s1 in 0..=s {
                let mut sub = mask;
                loop {
                    if let (Some(x), Some(y)) = (a[s1][sub], b[s - s1][mask & !sub]) {
                        best = best.max(Some(x + y));
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & mask;
                }
            }
            out[s][mask] = best;
        }
    }
    out
}

/// Returns the best selection of at most `k` universe leaves hitting every
/// family member, with its profit; `None` if no selection hits the family.
pub fn best_hitting_set(hs: &HittingSetTreeProfits) -> Result<Option<(u64, TaxaSet)>> {
    let fam = hs.family.len();
    if fam > MAX_FAMILY {
        return refuse(format!("family of {fam} sets exceeds {MAX_FAMILY}"));
    }
    let t = &hs.tree;
    let n = t.num_taxa();
    let k = hs.k.min(n);
    let full = 1usize << fam;
    let hit: Vec<usize> = (0..n)
        .map(|x| hs.family.iter().enumerate().filter(|(_, w)| w.contains(x)).fold(0, |m, (i, _)| m | 1 << i))
        .collect();
    // prefix[v][i]: merged table of the first i children of v (before adding
    // the edge into v); tables[v]: the table of v including its edge.
    let nv = t.num_vertices();
    let mut prefix: Vec<Vec<Table>> = vec![Vec::new(); nv];
    let mut tables: Vec<Table> = vec![Vec::new(); nv];
    let empty = {
        let mut e = vec![vec![None; full]; k + 1];
        e[0][0] = Some(0);
        e
    };
    for &v in t.preorder().iter().rev() {
        let mut acc = empty.clone();
        if let Some(x) = t.vertex_taxon(v) {
            if hs.universe.contains(x) && k >= 1 {
                let h = hit[x];
                for mask in 0..full {
                    if mask & !h == 0 {
                        acc[1][mask] = Some(0);
                    }
                }
            }
        }
        let mut steps = vec![acc.clone()];
        for &c in t.children(v) {
            acc = merge(&acc, &tables[c], k, full);
            steps.push(acc.clone());
        }
        let w = if v == t.root() { 0 } else { hs.weights[v] };
        for row in acc.iter_mut().skip(1) {
            for e in row.iter_mut() {
                *e = e.map(|x| x + w);
            }
        }
        prefix[v] = steps;
        tables[v] = acc;
    }
    let root = t.root();
    let mut best: Option<(u64, usize)> = None;
    for s in 0..=k {
        if let Some(v) = tables[root][s][full - 1] {
            if best.map_or(true, |(b, _)| v > b) {
                best = Some((v, s));
            }
        }
    }
    let Some((value, s)) = best else {
        return Ok(None);
    };
    let mut set = TaxaSet::new(n);
    let mut stack = vec![(root, s, full - 1)];
    while let Some((v, s, mask)) = stack.pop() {
        if s == 0 {
            continue;
        }
        let ch = t.children(v);
        if ch.is_empty() {
            set.insert(t.vertex_taxon(v).unwrap());
            continue;
        }
        let (mut s, mut mask) = (s, mask);
        for i in (0..ch.len()).rev() {
            let target = prefix[v][i + 1][s][mask];
            let (a, b) = (&prefix[v][i], &tables[ch[i]]);
            let mut found = None;
            'outer: for s1 in 0..=s {
                let mut sub = mask;
                loop {
                    if let (Some(x), Some(y)) = (a[s1][sub], b[s - s1][mask & !sub]) {
                        if Some(x + y) == target {
                            found = Some((s1, sub));
                            break 'outer;
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & mask;
                }
            }
            let (s1, sub) = found.expect("table entry has a witness");
            stack.push((ch[i], s - s1, mask & !sub));
            s = s1;
            mask = sub;
        }
    }
    Ok(Some((value, set)))
}

/// Decides whether a hitting selection with profit at least `D` exists.
pub fn solve_hitting_set_tree_profits(hs: &HittingSetTreeProfits) -> Result<Option<TaxaSet>> {
    Ok(best_hitting_set(hs)?.filter(|(v, _)| *v >= hs.d).map(|(_, s)| s))
}
