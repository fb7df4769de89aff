//! Vertex deletion sets to cluster and co-cluster graphs.

use crate::error::{precondition, Result};
use crate::model::{FoodWeb, TaxaSet};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphClass {
    /// Disjoint union of cliques.
    Cluster,
    /// Complement of a cluster graph: a complete multipartite graph.
    CoCluster,
}

/// A deletion set `Y` with the parts of `F - Y`.
///
/// For a cluster modulator the parts are the cliques, for a co-cluster
/// modulator they are the maximal independent sets. Each part lists its taxa
/// in topological order of the web.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulator {
    pub deletion: TaxaSet,
    pub class: GraphClass,
    pub parts: Vec<Vec<usize>>,
}

impl Modulator {
    pub fn size(&self) -> usize {
        self.deletion.len()
    }
}

fn linked(web: &FoodWeb, class: GraphClass, a: usize, b: usize) -> bool {
    match class {
        GraphClass::Cluster => web.adjacent(a, b),
        GraphClass::CoCluster => !web.adjacent(a, b),
    }
}

/// Components of the (complemented, for co-cluster) graph on the alive taxa.
fn parts_of(web: &FoodWeb, class: GraphClass, alive: &[bool]) -> Vec<Vec<usize>> {
    let n = web.num_taxa();
    let mut comp = vec![usize::MAX; n];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if !alive[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = parts.len();
        comp[s] = id;
        let mut stack = vec![s];
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for w in 0..n {
                if alive[w] && comp[w] == usize::MAX && w != v && linked(web, class, v, w) {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        parts.push(members);
    }
    let pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (i, &x) in web.topological_order().iter().enumerate() {
            p[x] = i;
        }
        p
    };
    for part in &mut parts {
        part.sort_by_key(|&x| pos[x]);
    }
    parts
}

/// An induced path `a - b - c` of the (complemented) graph, as three taxa.
fn find_p3(web: &FoodWeb, class: GraphClass, alive: &[bool]) -> Option<[usize; 3]> {
    let n = web.num_taxa();
    let alive_ids: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    for &b in &alive_ids {
        let nb: Vec<usize> = match class {
            GraphClass::Cluster => web.neighbors(b).filter(|&w| alive[w]).collect(),
            GraphClass::CoCluster => {
                alive_ids.iter().copied().filter(|&w| w != b && linked(web, class, b, w)).collect()
            }
        };
        for (i, &a) in nb.iter().enumerate() {
            for &c in &nb[i + 1..] {
                if !linked(web, class, a, c) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

fn branch(web: &FoodWeb, class: GraphClass, alive: &mut Vec<bool>, budget: usize, out: &mut Vec<usize>) -> bool {
    let Some(p3) = find_p3(web, class, alive) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for v in p3 {
        alive[v] = false;
        out.push(v);
        if branch(web, class, alive, budget - 1, out) {
            return true;
        }
        out.pop();
        alive[v] = true;
    }
    false
}

/// Smallest deletion set of size at most `d_max` into the class, found by
/// iterative deepening over branching on induced paths with three vertices.
pub fn find_modulator(web: &FoodWeb, class: GraphClass, d_max: usize) -> Option<Modulator> {
    let n = web.num_taxa();
    for budget in 0..=d_max.min(n) {
        let mut alive = vec![true; n];
        let mut out = Vec::new();
        if branch(web, class, &mut alive, budget, &mut out) {
            let deletion = TaxaSet::from_ids(n, out);
            let parts = parts_of(web, class, &alive);
            return Some(Modulator { deletion, class, parts });
        }
    }
    None
}

/// Checks that `F - Y` is in the class and returns the modulator with its parts.
pub fn validate_modulator(web: &FoodWeb, deletion: &TaxaSet, class: GraphClass) -> Result<Modulator> {
    let n = web.num_taxa();
    if deletion.capacity() != n {
        return precondition("deletion set ranges over a different number of taxa");
    }
    let alive: Vec<bool> = (0..n).map(|v| !deletion.contains(v)).collect();
    if let Some([a, b, c]) = find_p3(web, class, &alive) {
        let what = match class {
            GraphClass::Cluster => "cluster",
            GraphClass::CoCluster => "co-cluster",
        };
        return precondition(format!("F - Y is not a {what} graph: taxa {a}, {b}, {c} form an induced path"));
    }
    Ok(Modulator { deletion: deletion.clone(), class, parts: parts_of(web, class, &alive) })
}
