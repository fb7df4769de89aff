use crate::error::{precondition, refuse, Result};
use std::collections::HashSet;

/// Upper bound on how many labeled rooted trees one enumeration may yield.
pub const PATTERN_TREE_BUDGET: u64 = 5_000_000;

/// A rooted tree with colored vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternTree {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    colors: Vec<u32>,
}

impl PatternTree {
    pub fn new(parent: Vec<Option<usize>>, colors: Vec<u32>) -> Result<Self> {
        let n = parent.len();
        if n == 0 || colors.len() != n {
            return precondition("pattern tree needs one color per vertex and at least one vertex");
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return precondition("pattern tree must have exactly one root");
        }
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = parent[v] {
                if p >= n {
                    return precondition("pattern parent out of range");
                }
                children[p].push(v);
            }
        }
        let t = PatternTree { root: roots[0], parent, children, colors };
        if t.preorder().len() != n {
            return precondition("pattern parent array is not a tree");
        }
        Ok(t)
    }

    /// The single-vertex pattern.
    pub fn single(color: u32) -> Self {
        PatternTree { root: 0, parent: vec![None], children: vec![Vec::new()], colors: vec![color] }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn root_color(&self) -> u32 {
        self.colors[self.root]
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    pub fn height(&self) -> usize {
        let mut depth = vec![0; self.len()];
        let mut h = 0;
        for v in self.preorder() {
            for &c in &self.children[v] {
                depth[c] = depth[v] + 1;
                h = h.max(depth[c]);
            }
        }
        h
    }

    pub fn num_leaves(&self) -> usize {
        self.children.iter().filter(|c| c.is_empty()).count()
    }

    pub fn is_star(&self) -> bool {
        self.children[self.root].iter().all(|&c| self.children[c].is_empty())
    }

    pub fn is_colorful(&self) -> bool {
        let mut seen = HashSet::new();
        self.colors.iter().all(|c| seen.insert(*c))
    }

    /// The set of `(color of tail, color of head)` over all edges.
    pub fn color_pairs(&self) -> HashSet<(u32, u32)> {
        (0..self.len())
            .filter_map(|v| self.parent[v].map(|p| (self.colors[p], self.colors[v])))
            .collect()
    }

    /// First grandchild of the root in vertex order.
    pub fn grandchild(&self) -> Option<usize> {
        (0..self.len()).find(|&v| {
            self.parent[v].is_some_and(|p| self.parent[p] == Some(self.root))
        })
    }

    /// Removes the root child `u` and hangs its children on the root.
    pub fn contract(&self, u: usize) -> Result<PatternTree> {
        if self.parent[u] != Some(self.root) {
            return precondition("only a child of the pattern root can be contracted");
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&v| v != u).collect();
        let mut id = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            id[v] = i;
        }
        let parent = keep
            .iter()
            .map(|&v| self.parent[v].map(|p| if p == u { id[self.root] } else { id[p] }))
            .collect();
        let colors = keep.iter().map(|&v| self.colors[v]).collect();
        PatternTree::new(parent, colors)
    }
}

/// Every labeled rooted tree on `i` vertices, vertex `j` colored `j + 1`:
/// each Prüfer sequence is decoded to an unrooted tree and combined with each
/// root choice, `i^(i-1)` trees in total.
pub fn enumerate_labeled_rooted_trees(i: usize) -> Result<LabeledRootedTrees> {
    if i == 0 {
        return precondition("labeled trees need at least one vertex");
    }
    let count = (i as u64).checked_pow(i as u32 - 1);
    if count.map_or(true, |c| c > PATTERN_TREE_BUDGET) {
        return refuse(format!("{i}^{} labeled rooted trees exceed the enumeration budget", i - 1));
    }
    Ok(LabeledRootedTrees { i, seq: vec![0; i.saturating_sub(2)], root: 0, done: false, adj: None })
}

/// Iterator returned by [`enumerate_labeled_rooted_trees`].
pub struct LabeledRootedTrees {
    i: usize,
    seq: Vec<usize>,
    root: usize,
    done: bool,
    adj: Option<Vec<Vec<usize>>>,
}

fn prufer_decode(seq: &[usize], i: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); i];
    if i == 1 {
        return adj;
    }
    if i == 2 {
        adj[0].push(1);
        adj[1].push(0);
        return adj;
    }
    let mut degree = vec![1usize; i];
    for &s in seq {
        degree[s] += 1;
    }
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for &s in seq {
        let leaf = (0..i).find(|&v| degree[v] == 1).expect("a leaf always exists");
        link(leaf, s, &mut adj);
        degree[leaf] = 0;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..i).filter(|&v| degree[v] == 1).collect();
    link(rest[0], rest[1], &mut adj);
    adj
}

impl Iterator for LabeledRootedTrees {
    type Item = PatternTree;

    fn next(&mut self) -> Option<PatternTree> {
        if self.done {
            return None;
        }
        let i = self.i;
        let adj = self.adj.get_or_insert_with(|| prufer_decode(&self.seq, i)).clone();
        let mut parent = vec![None; i];
        let mut seen = vec![false; i];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    stack.push(w);
                }
            }
        }
        let tree = PatternTree::new(parent, (1..=i as u32).collect()).expect("decoded tree");
        self.root += 1;
        if self.root == i {
            self.root = 0;
            self.adj = None;
            // Advance the Prüfer sequence like an odometer.
            let mut pos = 0;
            loop {
                if pos == self.seq.len() {
                    self.done = true;
                    break;
                }
                self.seq[pos] += 1;
                if self.seq[pos] < i {
                    break;
                }
                self.seq[pos] = 0;
                pos += 1;
            }
        }
        Some(tree)
    }
}
