use super::TaxaSet;
use crate::error::{precondition, PddError, Result};
use std::collections::VecDeque;

/// A food-web: a DAG on the taxa where an arc `x -> y` means `x` is prey of `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoodWeb {
    prey: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl FoodWeb {
    /// Builds a web on `n` taxa from `(prey, predator)` arcs. Duplicate arcs are
    /// merged; cycles and self-loops are rejected.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut prey = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(x, y) in arcs {
            if x >= n || y >= n {
                return Err(PddError::Domain(format!("arc ({x}, {y}) mentions an unknown taxon")));
            }
            if x == y {
                return precondition(format!("self-loop on taxon {x}"));
            }
            if !prey[y].contains(&x) {
                prey[y].push(x);
                pred[x].push(y);
            }
        }
        for l in prey.iter_mut().chain(pred.iter_mut()) {
            l.sort_unstable();
        }
        let mut indeg: Vec<usize> = prey.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &w in &pred[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if topo.len() != n {
            let on_cycle = (0..n).find(|&v| indeg[v] > 0).unwrap();
            return precondition(format!("food-web contains a cycle through taxon {on_cycle}"));
        }
        Ok(FoodWeb { prey, pred, topo })
    }

    pub fn empty(n: usize) -> Self {
        FoodWeb::new(n, &[]).unwrap()
    }

    pub fn num_taxa(&self) -> usize {
        self.prey.len()
    }

    pub fn prey(&self, x: usize) -> &[usize] {
        &self.prey[x]
    }

    pub fn pred(&self, x: usize) -> &[usize] {
        &self.pred[x]
    }

    pub fn has_arc(&self, x: usize, y: usize) -> bool {
        self.prey[y].binary_search(&x).is_ok()
    }

    pub fn is_source(&self, x: usize) -> bool {
        self.prey[x].is_empty()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.num_taxa()).filter(|&x| self.is_source(x)).collect()
    }

    pub fn num_arcs(&self) -> usize {
        self.prey.iter().map(Vec::len).sum()
    }

    /// All arcs `(prey, predator)` ordered by predator then prey.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.num_taxa() {
            for &x in &self.prey[y] {
                out.push((x, y));
            }
        }
        out
    }

    /// A topological order in which every prey precedes its predators.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Taxa reachable from `x` along arcs, including `x`.
    pub fn descendants(&self, x: usize) -> TaxaSet {
        self.reach(x, &self.pred)
    }

    /// Taxa from which `x` is reachable, including `x`.
    pub fn ancestors(&self, x: usize) -> TaxaSet {
        self.reach(x, &self.prey)
    }

    fn reach(&self, x: usize, adj: &[Vec<usize>]) -> TaxaSet {
        let mut seen = TaxaSet::new(self.num_taxa());
        let mut stack = vec![x];
        seen.insert(x);
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Induced sub-web on `keep`, with taxa renumbered by the order of `back`
    /// (`back[new] = old`).
    pub fn induced(&self, back: &[usize]) -> FoodWeb {
        let mut fwd = vec![usize::MAX; self.num_taxa()];
        for (i, &o) in back.iter().enumerate() {
            fwd[o] = i;
        }
        let mut arcs = Vec::new();
        for (i, &o) in back.iter().enumerate() {
            for &p in &self.prey[o] {
                if fwd[p] != usize::MAX {
                    arcs.push((fwd[p], i));
                }
            }
        }
        FoodWeb::new(back.len(), &arcs).expect("induced sub-web of a DAG is a DAG")
    }

    /// Neighbours in the underlying undirected graph.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.prey[x].iter().chain(self.pred[x].iter()).copied()
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.has_arc(x, y) || self.has_arc(y, x)
    }
}
