use super::{FoodWeb, PhyloTree, TaxaSet};
use crate::error::{precondition, PddError, Result};
use serde::{Deserialize, Serialize};

/// A PDD instance: tree, food-web, budget `k` and diversity threshold `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub tree: PhyloTree,
    pub web: FoodWeb,
    pub k: usize,
    pub d: u64,
}

impl Instance {
    pub fn new(tree: PhyloTree, web: FoodWeb, k: usize, d: u64) -> Result<Self> {
        if tree.num_taxa() != web.num_taxa() {
            return precondition(format!(
                "tree has {} taxa but the food-web has {}",
                tree.num_taxa(),
                web.num_taxa()
            ));
        }
        Ok(Instance { tree, web, k, d })
    }

    pub fn n(&self) -> usize {
        self.tree.num_taxa()
    }

    /// Number of taxa allowed to go extinct, saturating at zero.
    pub fn kbar(&self) -> usize {
        self.n().saturating_sub(self.k)
    }

    /// Acceptable diversity loss, saturating at zero.
    pub fn dbar(&self) -> u64 {
        self.tree.total_weight().saturating_sub(self.d)
    }

    pub fn empty_set(&self) -> TaxaSet {
        TaxaSet::new(self.n())
    }

    pub fn with_params(&self, k: usize, d: u64) -> Instance {
        Instance { k, d, ..self.clone() }
    }

    pub fn taxon_id(&self, name: &str) -> Option<usize> {
        (0..self.n()).find(|&t| self.tree.taxon_name(t) == name)
    }

    /// Resolves taxon names to a set, naming the first unknown taxon on failure.
    pub fn taxa_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<TaxaSet> {
        let mut set = self.empty_set();
        for nm in names {
            let nm = nm.as_ref();
            let id = self
                .taxon_id(nm)
                .ok_or_else(|| PddError::Domain(format!("unknown taxon '{nm}'")))?;
            set.insert(id);
        }
        Ok(set)
    }

    pub fn names_of(&self, set: &TaxaSet) -> Vec<String> {
        set.iter().map(|t| self.tree.taxon_name(t).to_string()).collect()
    }

    /// Sub-instance on the kept taxa; returns it with the map new id -> old id.
    pub fn restrict(&self, keep: &TaxaSet) -> (Instance, Vec<usize>) {
        let (tree, back) = self.tree.restrict(keep);
        let web = self.web.induced(&back);
        (Instance { tree, web, k: self.k, d: self.d }, back)
    }

    /// Checks a claimed solution against size, viability and diversity.
    pub fn check(&self, set: &TaxaSet) -> bool {
        set.capacity() == self.n()
            && set.len() <= self.k
            && is_viable(&self.web, set)
            && self.tree.diversity(set) >= self.d
    }

    /// Packages a set as a solution with a viability certificate.
    pub fn solution(&self, set: TaxaSet) -> Solution {
        let pd_value = self.tree.diversity(&set);
        let certificate = viability_certificate(&self.web, &set);
        Solution { taxa: set, pd_value, certificate }
    }
}

/// A viable taxa set with its diversity and optional certificate forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub taxa: TaxaSet,
    pub pd_value: u64,
    pub certificate: Option<Vec<(usize, usize)>>,
}

/// Outcome of a decision solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes(Solution),
    No,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn witness(&self) -> Option<&Solution> {
        match self {
            Decision::Yes(s) => Some(s),
            Decision::No => None,
        }
    }
}

/// Serializable summary of a solution, by taxon name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedSolution {
    pub taxa: Vec<String>,
    pub pd: u64,
}

/// Diversity of `set`: the total weight of edges with an offspring in `set`.
pub fn pd(tree: &PhyloTree, set: &TaxaSet) -> Result<u64> {
    if set.capacity() != tree.num_taxa() {
        if let Some(t) = set.iter().find(|&t| t >= tree.num_taxa()) {
            return Err(PddError::Domain(format!("taxon id {t} is not in the tree")));
        }
    }
    let set = if set.capacity() == tree.num_taxa() {
        set.clone()
    } else {
        set.map(tree.num_taxa(), |t| t)
    };
    Ok(tree.diversity(&set))
}

/// Plain viability: every member is a source or has a prey inside the set.
pub fn is_viable(web: &FoodWeb, set: &TaxaSet) -> bool {
    set.iter()
        .all(|x| web.is_source(x) || web.prey(x).iter().any(|&p| set.contains(p)))
}

/// `Z`-viability: every source of `F[A]` is a source of `F[Z]`.
pub fn is_viable_within(web: &FoodWeb, a: &TaxaSet, z: &TaxaSet) -> Result<bool> {
    if !a.is_subset(z) {
        return precondition("viability check requires A to be a subset of Z");
    }
    Ok(a.iter().all(|x| {
        let in_a = web.prey(x).iter().any(|&p| a.contains(p));
        let in_z = web.prey(x).iter().any(|&p| z.contains(p));
        in_a || !in_z
    }))
}

/// Arc forest certifying viability: each member other than a source gets one
/// in-arc from an earlier member, so every component is rooted at a source.
pub fn viability_certificate(web: &FoodWeb, set: &TaxaSet) -> Option<Vec<(usize, usize)>> {
    let mut placed = TaxaSet::new(web.num_taxa());
    let mut arcs = Vec::new();
    for &x in web.topological_order() {
        if !set.contains(x) {
            continue;
        }
        if !web.is_source(x) {
            let p = *web.prey(x).iter().find(|&&p| placed.contains(p))?;
            arcs.push((p, x));
        }
        placed.insert(x);
    }
    Some(arcs)
}

/// Checks that `arcs` is a certificate forest for `set`.
pub fn is_certificate(web: &FoodWeb, set: &TaxaSet, arcs: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0usize; web.num_taxa()];
    for &(x, y) in arcs {
        if !set.contains(x) || !set.contains(y) || !web.has_arc(x, y) {
            return false;
        }
        indeg[y] += 1;
    }
    set.iter().all(|x| {
        if web.is_source(x) {
            indeg[x] == 0
        } else {
            indeg[x] == 1
        }
    })
}

/// Grows a viable set to exactly `k` taxa, each step adding the addable taxon
/// with the largest marginal diversity (smallest id on ties).
pub fn extend_to_size_k(tree: &PhyloTree, web: &FoodWeb, set: &TaxaSet, k: usize) -> Result<TaxaSet> {
    let n = web.num_taxa();
    if k > n {
        return precondition(format!("cannot extend to {k} taxa out of {n}"));
    }
    if set.len() > k {
        return precondition("set is already larger than k");
    }
    if !is_viable(web, set) {
        return precondition("set to extend is not viable");
    }
    let mut s = set.clone();
    let mut current = tree.diversity(&s);
    while s.len() < k {
        let mut best: Option<(u64, usize)> = None;
        for x in 0..n {
            if s.contains(x) {
                continue;
            }
            if !(web.is_source(x) || web.prey(x).iter().any(|&p| s.contains(p))) {
                continue;
            }
            let mut t = s.clone();
            t.insert(x);
            let gain = tree.diversity(&t) - current;
            if best.map_or(true, |(g, _)| gain > g) {
                best = Some((gain, x));
            }
        }
        // A viable set smaller than n always has an addable taxon: some source
        // or some predator of a member lies outside it.
        let (gain, x) = best.expect("viable proper subset has an addable taxon");
        s.insert(x);
        current += gain;
    }
    Ok(s)
}

/// Spanning subtree of `{root} ∪ set` as (vertices, total weight).
pub fn spanning_subtree_of_taxa(tree: &PhyloTree, set: &TaxaSet) -> (Vec<usize>, u64) {
    let mut verts = vec![tree.root()];
    verts.extend(set.iter().map(|t| tree.taxon_vertex(t)));
    tree.spanning_subtree(&verts).expect("nonempty vertex set")
}
