use super::PatternTree;
use crate::error::{precondition, PddError, Result};
use crate::model::{Instance, PhyloTree, TaxaSet};
use std::collections::VecDeque;

/// An instance whose tree vertices carry colors, tracked through the pattern
/// rules.
///
/// The tree and food-web always share their taxa. Taxa removed from the tree
/// are removed from the web as well, and `sources` remembers which of the
/// survivors were sources of the original web, so that a taxon whose prey
/// were all removed is not mistaken for a source.
#[derive(Clone, Debug)]
pub struct ColoredInstance {
    pub instance: Instance,
    /// Color of every tree vertex.
    pub colors: Vec<u32>,
    pub sources: TaxaSet,
    /// `back[t]` is the original id of taxon `t`.
    pub back: Vec<usize>,
    pub original_n: usize,
}

impl ColoredInstance {
    pub fn new(inst: &Instance, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != inst.tree.num_vertices() {
            return precondition("vertex coloring must cover every tree vertex");
        }
        let n = inst.n();
        Ok(ColoredInstance {
            instance: inst.clone(),
            colors,
            sources: TaxaSet::from_ids(n, inst.web.sources()),
            back: (0..n).collect(),
            original_n: n,
        })
    }

    pub fn lift(&self, set: &TaxaSet) -> TaxaSet {
        set.map(self.original_n, |t| self.back[t])
    }

    /// Removes the given taxa from tree and web.
    pub fn remove_taxa(&self, drop: &TaxaSet) -> ColoredInstance {
        if drop.is_empty() {
            return self.clone();
        }
        let keep = TaxaSet::full(self.instance.n()).difference(drop);
        let (tree, back, vback) = self.instance.tree.restrict_with_vertices(&keep);
        let web = self.instance.web.induced(&back);
        let n = back.len();
        ColoredInstance {
            instance: Instance { tree, web, k: self.instance.k, d: self.instance.d },
            colors: vback.iter().map(|&v| self.colors[v]).collect(),
            sources: TaxaSet::from_ids(n, (0..n).filter(|&t| self.sources.contains(back[t]))),
            back: back.iter().map(|&t| self.back[t]).collect(),
            original_n: self.original_n,
        }
    }

    fn remove_below(&self, tops: &[usize]) -> ColoredInstance {
        let mut drop = TaxaSet::new(self.instance.n());
        for &v in tops {
            drop.union_with(self.instance.tree.offspring(v));
        }
        self.remove_taxa(&drop)
    }

    fn size(&self) -> (usize, usize) {
        (self.instance.n(), self.instance.tree.num_vertices())
    }
}

/// Removes `desc(v)` for every tree edge `uv` whose color pair is not the
/// color pair of any pattern edge.
pub fn rr_pattern_edge_original(ci: &ColoredInstance, pattern: &PatternTree) -> ColoredInstance {
    let pairs = pattern.color_pairs();
    let t = &ci.instance.tree;
    let tops: Vec<usize> = (0..t.num_vertices())
        .filter(|&v| t.parent(v).is_some_and(|p| !pairs.contains(&(ci.colors[p], ci.colors[v]))))
        .collect();
    ci.remove_below(&tops)
}

/// For every pattern edge `u'v'`, removes `desc(u)` for each tree vertex `u`
/// colored like `u'` that has no child colored like `v'`. Runs to a fixpoint.
pub fn rr_pattern_edge_required(ci: &ColoredInstance, pattern: &PatternTree) -> ColoredInstance {
    let mut cur = ci.clone();
    loop {
        let t = &cur.instance.tree;
        let mut tops = Vec::new();
        for v in 0..pattern.len() {
            let Some(p) = pattern.parent(v) else { continue };
            let (cu, cv) = (pattern.color(p), pattern.color(v));
            for u in 0..t.num_vertices() {
                if cur.colors[u] == cu && !t.children(u).iter().any(|&w| cur.colors[w] == cv) {
                    tops.push(u);
                }
            }
        }
        // Removing the root's offspring empties the tree; that is a fixpoint.
        if tops.is_empty() || cur.instance.n() == 0 {
            return cur;
        }
        cur = cur.remove_below(&tops);
    }
}

/// Removes every taxon not reachable from a surviving original source
/// through surviving taxa.
pub fn rr_restrict_food_web(ci: &ColoredInstance) -> ColoredInstance {
    let web = &ci.instance.web;
    let n = ci.instance.n();
    let mut reached = TaxaSet::new(n);
    let mut queue: VecDeque<usize> = ci.sources.iter().collect();
    for &s in &queue {
        reached.insert(s);
    }
    while let Some(x) = queue.pop_front() {
        for &y in web.pred(x) {
            if reached.insert(y) {
                queue.push_back(y);
            }
        }
    }
    ci.remove_taxa(&TaxaSet::full(n).difference(&reached))
}

/// Applies the edge and food-web rules until nothing changes.
pub fn apply_pattern_rules(ci: &ColoredInstance, pattern: &PatternTree) -> ColoredInstance {
    let mut cur = ci.clone();
    loop {
        let before = cur.size();
        cur = rr_pattern_edge_original(&cur, pattern);
        cur = rr_pattern_edge_required(&cur, pattern);
        cur = rr_restrict_food_web(&cur);
        if cur.size() == before {
            return cur;
        }
    }
}

/// One contraction at the pattern grandchild `v_prime`.
///
/// Every tree vertex `u` colored like the parent `u'` of `v_prime` is removed
/// and its children are hung on `u`'s parent. A child colored like `v_prime`
/// inherits the weight of the removed edge. The caller is expected to have
/// applied [`apply_pattern_rules`] first.
pub fn rr_contract_internal_at(
    ci: &ColoredInstance,
    pattern: &PatternTree,
    v_prime: usize,
) -> Result<(ColoredInstance, PatternTree)> {
    let u_prime = match pattern.parent(v_prime) {
        Some(u) if pattern.parent(u) == Some(pattern.root()) => u,
        _ => return precondition("contraction needs a grandchild of the pattern root"),
    };
    let (cu, cv) = (pattern.color(u_prime), pattern.color(v_prime));
    let new_pattern = pattern.contract(u_prime)?;

    // A leaf colored like an internal pattern vertex cannot be in a matching set.
    let t = &ci.instance.tree;
    let doomed_leaves: Vec<usize> = (0..t.num_vertices())
        .filter(|&v| v != t.root() && t.is_leaf(v) && ci.colors[v] == cu)
        .collect();
    let ci = ci.remove_below(&doomed_leaves);
    let t = &ci.instance.tree;
    let nv = t.num_vertices();
    let contracted: Vec<bool> =
        (0..nv).map(|v| v != t.root() && ci.colors[v] == cu).collect();
    let mut parent: Vec<Option<usize>> = (0..nv).map(|v| t.parent(v)).collect();
    let mut weight: Vec<u64> = (0..nv).map(|v| t.weight(v)).collect();
    for u in (0..nv).filter(|&u| contracted[u]) {
        let p = t.parent(u).expect("contracted vertex is not the root");
        if contracted[p] {
            return precondition("two nested vertices share the contracted color");
        }
        for &v in t.children(u) {
            parent[v] = Some(p);
            if ci.colors[v] == cv {
                weight[v] = weight[v].checked_add(t.weight(u)).ok_or_else(|| {
                    PddError::Overflow("edge weight overflow while contracting".into())
                })?;
            }
        }
    }
    let keep: Vec<usize> = (0..nv).filter(|&v| !contracted[v]).collect();
    let mut id = vec![usize::MAX; nv];
    for (i, &v) in keep.iter().enumerate() {
        id[v] = i;
    }
    let tree = PhyloTree::from_parts(
        keep.iter().map(|&v| parent[v].map(|p| id[p])).collect(),
        keep.iter().map(|&v| weight[v]).collect(),
        keep.iter().map(|&v| t.name(v).to_string()).collect(),
        keep.iter().map(|&v| t.vertex_taxon(v)).collect(),
    )?;
    let colors = keep.iter().map(|&v| ci.colors[v]).collect();
    let inst = Instance { tree, web: ci.instance.web.clone(), k: ci.instance.k, d: ci.instance.d };
    Ok((ColoredInstance { instance: inst, colors, ..ci }, new_pattern))
}

/// Alternates the edge rules with contractions until the pattern is a star.
/// Once the pattern is a star and the rules are exhausted, the tree is a
/// star as well.
pub fn rr_contract_internal(
    ci: &ColoredInstance,
    pattern: &PatternTree,
) -> Result<(ColoredInstance, PatternTree)> {
    let mut cur = apply_pattern_rules(ci, pattern);
    let mut pat = pattern.clone();
    while let Some(v) = pat.grandchild() {
        let (next, np) = rr_contract_internal_at(&cur, &pat, v)?;
        pat = np;
        cur = apply_pattern_rules(&next, &pat);
    }
    Ok((cur, pat))
}
