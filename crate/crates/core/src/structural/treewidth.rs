//! s-PDD over a nice tree decomposition of the food-web.
//!
//! A chosen taxon is green when it is a source or has a chosen prey, red when
//! it is chosen but not yet fed, and black when it is not chosen. A table
//! entry of node `t` for labels `L` of the bag and count `s` holds the largest
//! diversity of a set `Y` of `s` taxa introduced below `t` such that the bag
//! is labelled `L` with respect to `Y` and every forgotten member of `Y` is
//! green.

use super::decomposition::{NiceTreeDecomposition, NodeKind};
use crate::error::{precondition, refuse, Result};
use crate::model::{Decision, Instance, Solution, TaxaSet};

/// Refuse when `9^width · nodes · (k + 1)` exceeds this.
pub const TW_BUDGET: f64 = 4e9;

const NEG: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Black,
    Red,
    Green,
}

impl Label {
    fn code(self) -> usize {
        self as usize
    }

    fn from_code(c: usize) -> Label {
        [Label::Black, Label::Red, Label::Green][c]
    }

    pub fn selected(self) -> bool {
        self != Label::Black
    }
}

/// Label of a bag vertex at a join from the labels in the two subtrees:
/// green if either side is green, otherwise red if either side is red.
pub fn join_outcome(a: Label, b: Label) -> Label {
    match (a, b) {
        (Label::Green, _) | (_, Label::Green) => Label::Green,
        (Label::Red, _) | (_, Label::Red) => Label::Red,
        _ => Label::Black,
    }
}

fn pow3(e: usize) -> usize {
    3usize.pow(e as u32)
}

fn digit(state: usize, p: usize) -> usize {
    state / pow3(p) % 3
}

fn set_digit(state: usize, p: usize, c: usize) -> usize {
    state - digit(state, p) * pow3(p) + c * pow3(p)
}

fn remove_digit(state: usize, p: usize) -> usize {
    let low = state % pow3(p);
    let high = state / pow3(p + 1);
    low + high * pow3(p)
}

fn insert_digit(state: usize, p: usize, c: usize) -> usize {
    let low = state % pow3(p);
    let high = state / pow3(p);
    low + c * pow3(p) + high * pow3(p + 1)
}

/// Filled tables of the dynamic program.
pub struct TreewidthTable<'a> {
    td: &'a NiceTreeDecomposition,
    inst: &'a Instance,
    caps: Vec<usize>,
    data: Vec<Vec<u64>>,
}

impl TreewidthTable<'_> {
    /// Largest count stored at the node.
    pub fn cap(&self, node: usize) -> usize {
        self.caps[node]
    }

    fn get(&self, node: usize, state: usize, s: usize) -> u64 {
        if s > self.caps[node] {
            return NEG;
        }
        self.data[node][state * (self.caps[node] + 1) + s]
    }

    /// Entry for labels aligned with the node's sorted bag.
    pub fn value(&self, node: usize, labels: &[Label], s: usize) -> Option<u64> {
        assert_eq!(labels.len(), self.td.node(node).bag.len());
        let state = labels.iter().enumerate().map(|(i, l)| l.code() * pow3(i)).sum();
        Some(self.get(node, state, s)).filter(|&v| v != NEG)
    }

    /// Best value at the root and a set attaining it.
    pub fn optimum(&self) -> Solution {
        let r = self.td.root();
        let s = (0..=self.caps[r]).filter(|&s| self.get(r, 0, s) != NEG).max_by_key(|&s| (self.get(r, 0, s), s));
        let s = s.expect("the empty set is always feasible");
        let set = self.witness(r, 0, s);
        self.inst.solution(set)
    }

    fn weight(&self, v: usize) -> u64 {
        let t = &self.inst.tree;
        t.weight(t.taxon_vertex(v))
    }

    fn witness(&self, node: usize, state: usize, s: usize) -> TaxaSet {
        let inst = self.inst;
        let mut set = inst.empty_set();
        let mut stack = vec![(node, state, s)];
        while let Some((t, st, s)) = stack.pop() {
            let target = self.get(t, st, s);
            let nd = self.td.node(t);
            match nd.kind {
                NodeKind::Leaf => {}
                NodeKind::Forget(v) => {
                    let c = nd.children[0];
                    let p = self.td.node(c).bag.binary_search(&v).unwrap();
                    let pick = [Label::Green, Label::Black]
                        .into_iter()
                        .map(|l| insert_digit(st, p, l.code()))
                        .find(|&cs| self.get(c, cs, s) == target)
                        .expect("forget entry has a witness");
                    stack.push((c, pick, s));
                }
                NodeKind::Introduce(v) => {
                    let c = nd.children[0];
                    let p = nd.bag.binary_search(&v).unwrap();
                    let base = remove_digit(st, p);
                    if digit(st, p) == Label::Black.code() {
                        stack.push((c, base, s));
                        continue;
                    }
                    set.insert(v);
                    let w = self.weight(v);
                    let found = self
                        .introduce_children(t, st, p)
                        .into_iter()
                        .find(|&cs| {
                            let x = self.get(c, cs, s - 1);
                            x != NEG && x + w == target
                        })
                        .expect("introduce entry has a witness");
                    stack.push((c, found, s - 1));
                }
                NodeKind::Join => {
                    let (c1, c2) = (nd.children[0], nd.children[1]);
                    let (sel, wsel) = self.selected_in(t, st);
                    let mut found = None;
                    'search: for (st1, st2) in join_pairs(&nd.bag, st) {
                        for s1 in sel..=self.caps[c1].min(s + sel) {
                            let s2 = s + sel - s1;
                            let (a, b) = (self.get(c1, st1, s1), self.get(c2, st2, s2));
                            if a != NEG && b != NEG && a + b - wsel == target {
                                found = Some((st1, s1, st2, s2));
                                break 'search;
                            }
                        }
                    }
                    let (st1, s1, st2, s2) = found.expect("join entry has a witness");
                    stack.push((c1, st1, s1));
                    stack.push((c2, st2, s2));
                }
            }
        }
        set
    }

    fn selected_in(&self, node: usize, st: usize) -> (usize, u64) {
        let bag = &self.td.node(node).bag;
        let mut count = 0;
        let mut w = 0;
        for (i, &v) in bag.iter().enumerate() {
            if digit(st, i) != Label::Black.code() {
                count += 1;
                w += self.weight(v);
            }
        }
        (count, w)
    }

    /// Child states compatible with introducing a selected `v` at position `p`
    /// of `node` in state `st`; empty if `st` labels `v` or its predators wrongly.
    fn introduce_children(&self, node: usize, st: usize, p: usize) -> Vec<usize> {
        intro_children(self.inst, &self.td.node(node).bag, st, p)
    }
}

fn intro_children(inst: &Instance, bag: &[usize], st: usize, p: usize) -> Vec<usize> {
    let web = &inst.web;
    let v = bag[p];
    let fed = web.is_source(v)
        || bag.iter().enumerate().any(|(i, &u)| i != p && digit(st, i) != 0 && web.has_arc(u, v));
    let want = if fed { Label::Green } else { Label::Red };
    if digit(st, p) != want.code() {
        return Vec::new();
    }
    let mut preds = Vec::new();
    for (i, &u) in bag.iter().enumerate() {
        if i != p && web.has_arc(v, u) {
            match Label::from_code(digit(st, i)) {
                Label::Red => return Vec::new(),
                Label::Green => preds.push(i),
                Label::Black => {}
            }
        }
    }
    let base = remove_digit(st, p);
    let mut out = Vec::with_capacity(1 << preds.len());
    for mask in 0u32..1 << preds.len() {
        let mut cs = base;
        for (j, &i) in preds.iter().enumerate() {
            if mask >> j & 1 == 1 {
                let at = if i > p { i - 1 } else { i };
                cs = set_digit(cs, at, Label::Red.code());
            }
        }
        out.push(cs);
    }
    out
}

/// Pairs of child states that combine into `st` at a join over `bag`.
fn join_pairs(bag: &[usize], st: usize) -> Vec<(usize, usize)> {
    let mut pairs = vec![(0usize, 0usize)];
    for i in 0..bag.len() {
        let l = Label::from_code(digit(st, i));
        let options: &[(Label, Label)] = match l {
            Label::Black => &[(Label::Black, Label::Black)],
            Label::Red => &[(Label::Red, Label::Red)],
            Label::Green => &[(Label::Green, Label::Green), (Label::Green, Label::Red), (Label::Red, Label::Green)],
        };
        let mut next = Vec::with_capacity(pairs.len() * options.len());
        for &(a, b) in &pairs {
            for &(x, y) in options {
                debug_assert_eq!(join_outcome(x, y), l);
                next.push((a + x.code() * pow3(i), b + y.code() * pow3(i)));
            }
        }
        pairs = next;
    }
    pairs
}

fn check(inst: &Instance, td: &NiceTreeDecomposition) -> Result<()> {
    if !inst.tree.is_star() {
        return precondition("treewidth solver needs a star tree");
    }
    td.validate(&inst.web)?;
    let cost = 9f64.powi(td.width() as i32) * td.len() as f64 * (inst.k as f64 + 1.0);
    if cost > TW_BUDGET {
        return refuse(format!("width {} with {} nodes exceeds the table budget", td.width(), td.len()));
    }
    Ok(())
}

/// Fills every table of the decomposition.
pub fn treewidth_table<'a>(inst: &'a Instance, td: &'a NiceTreeDecomposition) -> Result<TreewidthTable<'a>> {
    check(inst, td)?;
    let k = inst.k.min(inst.n());
    let nn = td.len();
    let mut table = TreewidthTable { td, inst, caps: vec![0; nn], data: vec![Vec::new(); nn] };
    let mut size = vec![0usize; nn];
    for t in td.postorder() {
        let nd = td.node(t);
        let b = nd.bag.len();
        let states = pow3(b);
        let (cap, data) = match nd.kind {
            NodeKind::Leaf => (0, vec![0]),
            NodeKind::Forget(v) => {
                let c = nd.children[0];
                size[t] = size[c];
                let cap = table.caps[c];
                let p = td.node(c).bag.binary_search(&v).unwrap();
                let mut data = vec![NEG; states * (cap + 1)];
                for st in 0..states {
                    for s in 0..=cap {
                        let g = table.get(c, insert_digit(st, p, Label::Green.code()), s);
                        let bl = table.get(c, insert_digit(st, p, Label::Black.code()), s);
                        data[st * (cap + 1) + s] = match (g, bl) {
                            (NEG, x) | (x, NEG) => x,
                            (x, y) => x.max(y),
                        };
                    }
                }
                (cap, data)
            }
            NodeKind::Introduce(v) => {
                let c = nd.children[0];
                size[t] = size[c] + 1;
                let cap = k.min(size[t]);
                let p = nd.bag.binary_search(&v).unwrap();
                let w = table.weight(v);
                let mut data = vec![NEG; states * (cap + 1)];
                for st in 0..states {
                    let row = &mut data[st * (cap + 1)..(st + 1) * (cap + 1)];
                    if digit(st, p) == Label::Black.code() {
                        let cs = remove_digit(st, p);
                        for (s, e) in row.iter_mut().enumerate() {
                            *e = table.get(c, cs, s);
                        }
                        continue;
                    }
                    for cs in intro_children(inst, &nd.bag, st, p) {
                        for s in 1..=cap {
                            let x = table.get(c, cs, s - 1);
                            if x != NEG && (row[s] == NEG || x + w > row[s]) {
                                row[s] = x + w;
                            }
                        }
                    }
                }
                (cap, data)
            }
            NodeKind::Join => {
                let (c1, c2) = (nd.children[0], nd.children[1]);
                size[t] = size[c1] + size[c2] - b;
                let cap = k.min(size[t]);
                let mut data = vec![NEG; states * (cap + 1)];
                for st in 0..states {
                    let (sel, wsel) = table.selected_in(t, st);
                    for (st1, st2) in join_pairs(&nd.bag, st) {
                        for s1 in sel..=table.caps[c1] {
                            let a = table.get(c1, st1, s1);
                            if a == NEG {
                                continue;
                            }
                            for s2 in sel..=table.caps[c2] {
                                let s = s1 + s2 - sel;
                                if s > cap {
                                    break;
                                }
                                let bb = table.get(c2, st2, s2);
                                if bb == NEG {
                                    continue;
                                }
                                let e = &mut data[st * (cap + 1) + s];
                                let val = a + bb - wsel;
                                if *e == NEG || val > *e {
                                    *e = val;
                                }
                            }
                        }
                    }
                }
                (cap, data)
            }
        };
        table.caps[t] = cap;
        table.data[t] = data;
    }
    Ok(table)
}

/// Maximum diversity viable set of at most `k` taxa.
pub fn best_by_treewidth(inst: &Instance, td: &NiceTreeDecomposition) -> Result<Solution> {
    Ok(treewidth_table(inst, td)?.optimum())
}

/// s-PDD over a nice tree decomposition of the food-web.
pub fn solve_spdd_by_treewidth(inst: &Instance, td: &NiceTreeDecomposition) -> Result<Decision> {
    let best = best_by_treewidth(inst, td)?;
    Ok(if best.pd_value >= inst.d { Decision::Yes(best) } else { Decision::No })
}
