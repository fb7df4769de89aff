//! Nice tree decompositions of the underlying undirected graph of a food-web.
//!
//! Text format, one node per line in post-order:
//!
//! ```text
//! # id type members...
//! 0 leaf
//! 1 introduce a
//! 2 introduce a b
//! 3 forget b
//! ```
//!
//! `leaf` nodes push onto a stack, `introduce` and `forget` nodes replace the
//! top of the stack, and `join` nodes replace the two topmost entries. The
//! single remaining entry is the root. Members are taxon names and list the
//! whole bag of the node.

use crate::error::{precondition, PddError, Result};
use crate::model::FoodWeb;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted bag members.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    n: usize,
    nodes: Vec<NiceNode>,
    root: usize,
    width: usize,
}

fn node_err<T>(i: usize, msg: impl std::fmt::Display) -> Result<T> {
    precondition(format!("decomposition node {i}: {msg}"))
}

impl NiceTreeDecomposition {
    /// Checks the shape of every node and that the nodes form one tree.
    pub fn new(n: usize, nodes: Vec<NiceNode>, root: usize) -> Result<Self> {
        if root >= nodes.len() {
            return precondition("decomposition root is out of range");
        }
        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(i) = stack.pop() {
            for &c in &nodes[i].children {
                if c >= nodes.len() || seen[c] {
                    return node_err(i, "children do not form a tree");
                }
                seen[c] = true;
                stack.push(c);
            }
        }
        if seen.iter().any(|s| !s) {
            return precondition("decomposition has nodes unreachable from the root");
        }
        if !nodes[root].bag.is_empty() {
            return precondition("root bag must be empty");
        }
        for (i, node) in nodes.iter().enumerate() {
            let bag = &node.bag;
            if bag.windows(2).any(|w| w[0] >= w[1]) || bag.iter().any(|&v| v >= n) {
                return node_err(i, "bag must be sorted, duplicate free and in range");
            }
            let child_bag = |j: usize| &nodes[node.children[j]].bag;
            match node.kind {
                NodeKind::Leaf => {
                    if !node.children.is_empty() || !bag.is_empty() {
                        return node_err(i, "leaf must be childless with an empty bag");
                    }
                }
                NodeKind::Introduce(v) | NodeKind::Forget(v) => {
                    if node.children.len() != 1 {
                        return node_err(i, "introduce and forget nodes have one child");
                    }
                    let (big, small) =
                        if matches!(node.kind, NodeKind::Introduce(_)) { (bag, child_bag(0)) } else { (child_bag(0), bag) };
                    let mut expect = small.clone();
                    if small.contains(&v) {
                        return node_err(i, format!("vertex {v} changes no bag"));
                    }
                    expect.push(v);
                    expect.sort_unstable();
                    if &expect != big {
                        return node_err(i, format!("bags differ by more than vertex {v}"));
                    }
                }
                NodeKind::Join => {
                    if node.children.len() != 2 || child_bag(0) != bag || child_bag(1) != bag {
                        return node_err(i, "join needs two children with its own bag");
                    }
                }
            }
        }
        let width = nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0).saturating_sub(1);
        Ok(NiceTreeDecomposition { n, nodes, root, width })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &NiceNode {
        &self.nodes[i]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Children before parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((i, expanded)) = stack.pop() {
            if expanded {
                out.push(i);
            } else {
                stack.push((i, true));
                for &c in self.nodes[i].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Vertex coverage, edge coverage and connectivity of occurrences.
    pub fn validate(&self, web: &FoodWeb) -> Result<()> {
        if web.num_taxa() != self.n {
            return precondition("decomposition and food-web differ in size");
        }
        let mut parent = vec![usize::MAX; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = i;
            }
        }
        let mut tops = vec![0usize; self.n];
        let mut covered: HashSet<(usize, usize)> = HashSet::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let up = parent[i];
            for (a, &v) in node.bag.iter().enumerate() {
                if up == usize::MAX || self.nodes[up].bag.binary_search(&v).is_err() {
                    tops[v] += 1;
                }
                for &w in &node.bag[a + 1..] {
                    if web.adjacent(v, w) {
                        covered.insert((v, w));
                    }
                }
            }
        }
        if let Some(v) = (0..self.n).find(|&v| tops[v] != 1) {
            return precondition(if tops[v] == 0 {
                format!("taxon {v} lies in no bag")
            } else {
                format!("bags containing taxon {v} are not connected")
            });
        }
        for (x, y) in web.arcs() {
            if !covered.contains(&(x.min(y), x.max(y))) {
                return precondition(format!("arc ({x}, {y}) lies in no bag"));
            }
        }
        Ok(())
    }
}

fn undirected(web: &FoodWeb) -> Vec<Vec<usize>> {
    (0..web.num_taxa())
        .map(|x| {
            let mut v: Vec<usize> = web.neighbors(x).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect()
}

fn is_forest(adj: &[Vec<usize>]) -> bool {
    let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    let mut comps = 0;
    let mut seen = vec![false; adj.len()];
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        comps += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    edges + comps == adj.len()
}

/// Repeatedly removes a vertex of degree at most one.
fn forest_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut done = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        if done[v] {
            continue;
        }
        done[v] = true;
        order.push(v);
        for &w in &adj[v] {
            if !done[w] {
                deg[w] -= 1;
                if deg[w] <= 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Greedy elimination by fewest fill edges, ties by degree and id.
fn min_fill_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut g: Vec<BTreeSet<usize>> = adj.iter().map(|a| a.iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let nb: Vec<usize> = g[v].iter().copied().collect();
            let mut fill = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !g[a].contains(&b) {
                        fill += 1;
                    }
                }
            }
            let key = (fill, nb.len(), v);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        let v = best.unwrap().2;
        let nb: Vec<usize> = g[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            g[a].remove(&v);
            for &b in &nb[i + 1..] {
                g[a].insert(b);
                g[b].insert(a);
            }
        }
        g[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Forgets and introduces vertices on top of `from` until its bag is `to`.
    fn chain(&mut self, mut from: usize, to: &[usize]) -> usize {
        let current = self.nodes[from].bag.clone();
        let mut bag = current.clone();
        for &v in current.iter().filter(|v| to.binary_search(v).is_err()) {
            bag.retain(|&w| w != v);
            from = self.push(NodeKind::Forget(v), bag.clone(), vec![from]);
        }
        for &v in to.iter().filter(|v| current.binary_search(v).is_err()) {
            let at = bag.binary_search(&v).unwrap_err();
            bag.insert(at, v);
            from = self.push(NodeKind::Introduce(v), bag.clone(), vec![from]);
        }
        from
    }

    fn join_all(&mut self, tops: Vec<usize>) -> usize {
        let mut it = tops.into_iter();
        let mut acc = it.next().expect("at least one subtree");
        for t in it {
            let bag = self.nodes[acc].bag.clone();
            acc = self.push(NodeKind::Join, bag, vec![acc, t]);
        }
        acc
    }
}

/// Turns an elimination order into a nice tree decomposition.
pub fn from_elimination_order(web: &FoodWeb, order: &[usize]) -> Result<NiceTreeDecomposition> {
    let n = web.num_taxa();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return precondition("elimination order must be a permutation of the taxa");
        }
        pos[v] = i;
    }
    if order.len() != n {
        return precondition("elimination order must be a permutation of the taxa");
    }
    let adj = undirected(web);
    let mut g: Vec<BTreeSet<usize>> = adj.iter().map(|a| a.iter().copied().collect()).collect();
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut td_parent = vec![usize::MAX; n];
    for &v in order {
        let later: Vec<usize> = g[v].iter().copied().collect();
        for (i, &a) in later.iter().enumerate() {
            g[a].remove(&v);
            for &b in &later[i + 1..] {
                g[a].insert(b);
                g[b].insert(a);
            }
        }
        if let Some(&p) = later.iter().min_by_key(|&&u| pos[u]) {
            td_parent[v] = p;
        }
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags[v] = bag;
    }
    let mut td_children = vec![Vec::new(); n];
    for &v in order {
        if td_parent[v] != usize::MAX {
            td_children[td_parent[v]].push(v);
        }
    }
    let mut b = Builder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; n];
    let mut roots = Vec::new();
    for &v in order {
        let subtrees: Vec<usize> = if td_children[v].is_empty() {
            let leaf = b.push(NodeKind::Leaf, Vec::new(), Vec::new());
            vec![b.chain(leaf, &bags[v])]
        } else {
            td_children[v].iter().map(|&c| b.chain(top[c], &bags[v])).collect()
        };
        top[v] = b.join_all(subtrees);
        if td_parent[v] == usize::MAX {
            roots.push(b.chain(top[v], &[]));
        }
    }
    if roots.is_empty() {
        roots.push(b.push(NodeKind::Leaf, Vec::new(), Vec::new()));
    }
    let root = b.join_all(roots);
    let td = NiceTreeDecomposition::new(n, b.nodes, root)?;
    td.validate(web)?;
    Ok(td)
}

/// Exact width-one decomposition for forests, min-fill elimination otherwise.
pub fn build_nice_tree_decomposition(web: &FoodWeb) -> Result<NiceTreeDecomposition> {
    let adj = undirected(web);
    let order = if is_forest(&adj) { forest_order(&adj) } else { min_fill_order(&adj) };
    from_elimination_order(web, &order)
}

/// Parses the text format; `names` maps taxon ids to names.
pub fn parse_decomposition(web: &FoodWeb, names: &[String], text: &str) -> Result<NiceTreeDecomposition> {
    let ids: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut nodes: Vec<NiceNode> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut labels: HashSet<String> = HashSet::new();
    let perr = |line: usize, msg: String| PddError::Parse { line, msg };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 2 {
            return Err(perr(line, format!("expected 'id type members...', found '{l}'")));
        }
        if !labels.insert(toks[0].to_string()) {
            return Err(perr(line, format!("duplicate node id '{}'", toks[0])));
        }
        let mut bag = Vec::new();
        for nm in &toks[2..] {
            bag.push(*ids.get(nm).ok_or_else(|| perr(line, format!("unknown taxon '{nm}'")))?);
        }
        bag.sort_unstable();
        let pop = |stack: &mut Vec<usize>, count: usize| -> Result<Vec<usize>> {
            if stack.len() < count {
                return Err(perr(line, format!("'{}' needs {count} finished subtrees", toks[1])));
            }
            Ok(stack.split_off(stack.len() - count))
        };
        let (kind, children) = match toks[1] {
            "leaf" => (NodeKind::Leaf, Vec::new()),
            "join" => (NodeKind::Join, pop(&mut stack, 2)?),
            t @ ("introduce" | "forget") => {
                let ch = pop(&mut stack, 1)?;
                let child = &nodes[ch[0]].bag;
                let (big, small) = if t == "introduce" { (&bag, child) } else { (child, &bag) };
                let diff: Vec<usize> = big.iter().copied().filter(|v| small.binary_search(v).is_err()).collect();
                if diff.len() != 1 {
                    return Err(perr(line, format!("{t} node must change its bag by one taxon")));
                }
                let kind = if t == "introduce" { NodeKind::Introduce(diff[0]) } else { NodeKind::Forget(diff[0]) };
                (kind, ch)
            }
            other => return Err(perr(line, format!("unknown node type '{other}'"))),
        };
        nodes.push(NiceNode { kind, bag, children });
        stack.push(nodes.len() - 1);
    }
    if stack.len() != 1 {
        return Err(perr(text.lines().count().max(1), format!("{} subtrees remain; expected one root", stack.len())));
    }
    let td = NiceTreeDecomposition::new(web.num_taxa(), nodes, stack[0])?;
    td.validate(web)?;
    Ok(td)
}

/// Writes the text format accepted by [`parse_decomposition`].
pub fn write_decomposition(td: &NiceTreeDecomposition, names: &[String]) -> String {
    let mut out = String::from("# id type members\n");
    for (id, i) in td.postorder().into_iter().enumerate() {
        let node = td.node(i);
        let kind = match node.kind {
            NodeKind::Leaf => "leaf",
            NodeKind::Introduce(_) => "introduce",
            NodeKind::Forget(_) => "forget",
            NodeKind::Join => "join",
        };
        write!(out, "{id} {kind}").unwrap();
        for &v in &node.bag {
            write!(out, " {}", names[v]).unwrap();
        }
        out.push('\n');
    }
    out
}
