use super::TaxaSet;
use crate::error::{precondition, PddError, Result};

/// A rooted phylogenetic X-tree with positive integer edge weights.
///
/// Vertices are `0..num_vertices()`. Each edge is identified with its head
/// vertex, so `weight(v)` is the weight of the edge entering `v`. Leaves are
/// in bijection with the taxa `0..num_taxa()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhyloTree {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    weight: Vec<u64>,
    names: Vec<String>,
    taxon_vertex: Vec<usize>,
    vertex_taxon: Vec<Option<usize>>,
    preorder: Vec<usize>,
    depth: Vec<usize>,
    offspring: Vec<TaxaSet>,
    total: u64,
}

impl PhyloTree {
    /// Builds a tree from a parent array.
    ///
    /// `taxon_of[v]` must be `Some` exactly on the leaves, and the ids must
    /// form `0..n`. Weights of the root entry are ignored.
    pub fn from_parts(
        parent: Vec<Option<usize>>,
        weight: Vec<u64>,
        names: Vec<String>,
        taxon_of: Vec<Option<usize>>,
    ) -> Result<Self> {
        let nv = parent.len();
        if nv == 0 {
            return precondition("tree has no vertices");
        }
        if weight.len() != nv || names.len() != nv || taxon_of.len() != nv {
            return precondition("tree arrays have mismatched lengths");
        }
        let roots: Vec<usize> = (0..nv).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return precondition(format!("tree must have exactly one root, found {}", roots.len()));
        }
        let root = roots[0];
        let mut children = vec![Vec::new(); nv];
        for v in 0..nv {
            if let Some(p) = parent[v] {
                if p >= nv {
                    return precondition(format!("vertex {v} has parent {p} out of range"));
                }
                if weight[v] == 0 {
                    return Err(PddError::Domain(format!(
                        "edge into '{}' has weight 0; weights must be positive",
                        names[v]
                    )));
                }
                children[p].push(v);
            }
        }
        let mut preorder = Vec::with_capacity(nv);
        let mut depth = vec![0usize; nv];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &c in children[v].iter().rev() {
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        if preorder.len() != nv {
            return precondition("parent array contains a cycle or a detached vertex");
        }
        let mut taxon_vertex = Vec::new();
        let mut n = 0;
        for v in 0..nv {
            let leaf = children[v].is_empty();
            if v == root && taxon_of[v].is_some() {
                return precondition("the root cannot carry a taxon");
            }
            match (leaf, taxon_of[v]) {
                (true, Some(t)) => {
                    n = n.max(t + 1);
                }
                (true, None) if v == root => {}
                (true, None) => {
                    return precondition(format!("leaf '{}' carries no taxon", names[v]));
                }
                (false, Some(_)) => {
                    return precondition(format!("internal vertex '{}' carries a taxon", names[v]));
                }
                (false, None) => {}
            }
        }
        taxon_vertex.resize(n, usize::MAX);
        for v in 0..nv {
            if let Some(t) = taxon_of[v] {
                if taxon_vertex[t] != usize::MAX {
                    return precondition(format!("taxon id {t} assigned twice"));
                }
                taxon_vertex[t] = v;
            }
        }
        if taxon_vertex.iter().any(|&v| v == usize::MAX) {
            return precondition("taxon ids are not dense");
        }
        let mut offspring = vec![TaxaSet::new(n); nv];
        for &v in preorder.iter().rev() {
            if let Some(t) = taxon_of[v] {
                offspring[v].insert(t);
            }
            if let Some(p) = parent[v] {
                let o = offspring[v].clone();
                offspring[p].union_with(&o);
            }
        }
        let mut total: u64 = 0;
        for v in 0..nv {
            if parent[v].is_some() {
                total = total
                    .checked_add(weight[v])
                    .ok_or_else(|| PddError::Overflow("total tree weight exceeds u64".into()))?;
            }
        }
        let mut weight = weight;
        weight[root] = 0;
        Ok(PhyloTree {
            root,
            parent,
            children,
            weight,
            names,
            taxon_vertex,
            vertex_taxon: taxon_of,
            preorder,
            depth,
            offspring,
            total,
        })
    }

    /// A star with one leaf per taxon; `names[i]` and `weights[i]` describe taxon `i`.
    pub fn star(names: &[String], weights: &[u64]) -> Result<Self> {
        let n = names.len();
        let mut parent = vec![None];
        let mut w = vec![0];
        let mut nm = vec!["root".to_string()];
        let mut tax = vec![None];
        for i in 0..n {
            parent.push(Some(0));
            w.push(weights[i]);
            nm.push(names[i].clone());
            tax.push(Some(i));
        }
        Self::from_parts(parent, w, nm, tax)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn num_vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn num_taxa(&self) -> usize {
        self.taxon_vertex.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Weight of the edge entering `v`; zero for the root.
    pub fn weight(&self, v: usize) -> u64 {
        self.weight[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn taxon_name(&self, t: usize) -> &str {
        &self.names[self.taxon_vertex[t]]
    }

    pub fn taxon_names(&self) -> Vec<String> {
        (0..self.num_taxa()).map(|t| self.taxon_name(t).to_string()).collect()
    }

    pub fn taxon_vertex(&self, t: usize) -> usize {
        self.taxon_vertex[t]
    }

    pub fn vertex_taxon(&self, v: usize) -> Option<usize> {
        self.vertex_taxon[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Length of the longest root-to-leaf path in edges.
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Taxa below `v` (including `v` when it is a leaf).
    pub fn offspring(&self, v: usize) -> &TaxaSet {
        &self.offspring[v]
    }

    /// Sum of all edge weights, i.e. the diversity of the full taxa set.
    pub fn total_weight(&self) -> u64 {
        self.total
    }

    pub fn max_weight(&self) -> u64 {
        self.edges().map(|v| self.weight[v]).max().unwrap_or(0)
    }

    /// Heads of all edges in preorder.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.preorder.iter().copied().filter(move |&v| v != self.root)
    }

    pub fn is_star(&self) -> bool {
        self.children[self.root].iter().all(|&c| self.is_leaf(c))
    }

    /// True when every internal vertex has at least two children.
    pub fn is_phylogenetic(&self) -> bool {
        (0..self.num_vertices()).all(|v| self.is_leaf(v) || self.children[v].len() >= 2)
    }

    /// Diversity of a taxa set. The set must range over this tree's taxa.
    pub fn diversity(&self, set: &TaxaSet) -> u64 {
        debug_assert_eq!(set.capacity(), self.num_taxa());
        let mut seen = vec![false; self.num_vertices()];
        let mut sum = 0u64;
        for t in set.iter() {
            let mut v = self.taxon_vertex[t];
            while v != self.root && !seen[v] {
                seen[v] = true;
                sum += self.weight[v];
                v = self.parent[v].expect("non-root vertex has a parent");
            }
        }
        sum
    }

    /// Rebuilds the tree on a subset of taxa, dropping vertices without kept
    /// offspring. Unary vertices are kept so diversities are preserved. Returns
    /// the new tree and, for each new taxon id, the old id.
    pub fn restrict(&self, keep: &TaxaSet) -> (PhyloTree, Vec<usize>) {
        let (t, back, _) = self.restrict_with_vertices(keep);
        (t, back)
    }

    /// Like [`PhyloTree::restrict`], also returning the old vertex of every new vertex.
    pub fn restrict_with_vertices(&self, keep: &TaxaSet) -> (PhyloTree, Vec<usize>, Vec<usize>) {
        let mut vertex_back = Vec::new();
        let mut new_id = vec![usize::MAX; self.num_vertices()];
        let mut parent = Vec::new();
        let mut weight = Vec::new();
        let mut names = Vec::new();
        let mut taxa: Vec<Option<usize>> = Vec::new();
        let mut back = Vec::new();
        for &v in &self.preorder {
            let alive = v == self.root || self.offspring[v].intersects(keep);
            if !alive {
                continue;
            }
            new_id[v] = parent.len();
            vertex_back.push(v);
            parent.push(self.parent[v].map(|p| new_id[p]));
            weight.push(self.weight[v]);
            names.push(self.names[v].clone());
            match self.vertex_taxon[v] {
                Some(t) => {
                    taxa.push(Some(back.len()));
                    back.push(t);
                }
                None => taxa.push(None),
            }
        }
        let t = PhyloTree::from_parts(parent, weight, names, taxa)
            .expect("restriction of a valid tree is valid");
        (t, back, vertex_back)
    }

    /// Minimal subtree connecting `vertices`, returned as the set of its
    /// vertices and its total edge weight.
    pub fn spanning_subtree(&self, vertices: &[usize]) -> Result<(Vec<usize>, u64)> {
        if vertices.is_empty() {
            return precondition("spanning subtree of an empty vertex set");
        }
        for &v in vertices {
            if v >= self.num_vertices() {
                return Err(PddError::Domain(format!("vertex {v} not in tree")));
            }
        }
        // The top of the subtree is the lowest common ancestor of all vertices.
        let lca = vertices.iter().copied().reduce(|a, b| self.lca(a, b)).unwrap();
        let mut inside = vec![false; self.num_vertices()];
        inside[lca] = true;
        let mut weight = 0;
        for &v in vertices {
            let mut u = v;
            while !inside[u] {
                inside[u] = true;
                weight += self.weight[u];
                u = self.parent[u].unwrap();
            }
        }
        let verts = (0..self.num_vertices()).filter(|&v| inside[v]).collect();
        Ok((verts, weight))
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    /// Vertices on the path from `v` up to (excluding) the root.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut u = v;
        while u != self.root {
            out.push(u);
            u = self.parent[u].unwrap();
        }
        out
    }
}
