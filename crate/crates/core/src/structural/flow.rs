//! Min-cost flow and PDD on source-separating instances whose food-web
//! consists of isolated arcs.

use crate::error::{precondition, PddError, Result};
use crate::model::{Decision, Instance, Solution, TaxaSet};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub cap: i64,
    pub cost: i64,
}

/// A directed network; parallel arcs are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    pub num_nodes: usize,
    pub source: usize,
    pub sink: usize,
    pub arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub fn new(num_nodes: usize, source: usize, sink: usize) -> Self {
        FlowNetwork { num_nodes, source, sink, arcs: Vec::new() }
    }

    pub fn add_node(&mut self) -> usize {
        self.num_nodes += 1;
        self.num_nodes - 1
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        self.arcs.push(FlowArc { from, to, cap, cost });
        self.arcs.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub cost: i64,
    /// Flow on each arc, by arc index.
    pub flow: Vec<i64>,
}

/// Integral min-cost flow of value exactly `value`, or `None` if no flow of
/// that value exists.
///
/// Successive shortest paths with potentials. Initial potentials come from
/// Bellman-Ford so negative arc costs are allowed as long as no negative
/// cycle exists; a negative cycle is reported as an error.
pub fn min_cost_flow(net: &FlowNetwork, value: i64) -> Result<Option<FlowResult>> {
    let n = net.num_nodes;
    if net.source >= n || net.sink >= n || net.arcs.iter().any(|a| a.from >= n || a.to >= n) {
        return precondition("flow network mentions a node out of range");
    }
    if net.arcs.iter().any(|a| a.cap < 0) {
        return precondition("capacities must be non-negative");
    }
    if value < 0 {
        return precondition("flow value must be non-negative");
    }
    // Residual arcs: 2i forward, 2i+1 backward.
    let m = net.arcs.len();
    let mut to = Vec::with_capacity(2 * m);
    let mut cap = Vec::with_capacity(2 * m);
    let mut cost = Vec::with_capacity(2 * m);
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in net.arcs.iter().enumerate() {
        to.extend([a.to, a.from]);
        cap.extend([a.cap, 0]);
        cost.extend([a.cost, -a.cost]);
        out[a.from].push(2 * i);
        out[a.to].push(2 * i + 1);
    }
    let pot = match acyclic_potentials(n, &out, &to, &cap, &cost) {
        Some(p) => p,
        None => bellman_ford(n, &out, &to, &cap, &cost)?,
    };
    let mut pot = pot;
    let mut sent = 0i64;
    let mut total = 0i64;
    let mut dist = vec![i64::MAX; n];
    let mut via = vec![usize::MAX; n];
    while sent < value {
        dist.iter_mut().for_each(|d| *d = i64::MAX);
        via.iter_mut().for_each(|p| *p = usize::MAX);
        dist[net.source] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i64, net.source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if u == net.sink {
                break;
            }
            for &e in &out[u] {
                if cap[e] == 0 {
                    continue;
                }
                let v = to[e];
                let nd = d + cost[e] + pot[u] - pot[v];
                if nd < dist[v] {
                    dist[v] = nd;
                    via[v] = e;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        if dist[net.sink] == i64::MAX {
            return Ok(None);
        }
        let far = dist[net.sink];
        for u in 0..n {
            pot[u] += dist[u].min(far);
        }
        let mut push = value - sent;
        let mut v = net.sink;
        while v != net.source {
            let e = via[v];
            push = push.min(cap[e]);
            v = to[e ^ 1];
        }
        let mut v = net.sink;
        while v != net.source {
            let e = via[v];
            cap[e] -= push;
            cap[e ^ 1] += push;
            total += push * cost[e];
            v = to[e ^ 1];
        }
        sent += push;
    }
    let flow = (0..m).map(|i| cap[2 * i + 1]).collect();
    Ok(Some(FlowResult { cost: total, flow }))
}

/// Shortest distances from a virtual root over positive-capacity arcs, when
/// those arcs form a DAG.
fn acyclic_potentials(n: usize, out: &[Vec<usize>], to: &[usize], cap: &[i64], cost: &[i64]) -> Option<Vec<i64>> {
    let mut indeg = vec![0usize; n];
    for u in 0..n {
        for &e in &out[u] {
            if cap[e] > 0 {
                indeg[to[e]] += 1;
            }
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&u| indeg[u] == 0).collect();
    let mut pot = vec![0i64; n];
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for &e in &out[u] {
            if cap[e] > 0 {
                let v = to[e];
                pot[v] = pot[v].min(pot[u] + cost[e]);
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
    }
    (seen == n).then_some(pot)
}

fn bellman_ford(n: usize, out: &[Vec<usize>], to: &[usize], cap: &[i64], cost: &[i64]) -> Result<Vec<i64>> {
    let mut pot = vec![0i64; n];
    for round in 0..=n {
        let mut changed = false;
        for u in 0..n {
            for &e in &out[u] {
                if cap[e] > 0 && pot[u] + cost[e] < pot[to[e]] {
                    pot[to[e]] = pot[u] + cost[e];
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        if round == n {
            return Err(PddError::Precondition("flow network has a negative-cost cycle".into()));
        }
    }
    Ok(pot)
}

/// Checks conservation, capacities and the value of a flow.
pub fn is_feasible_flow(net: &FlowNetwork, flow: &[i64], value: i64) -> bool {
    if flow.len() != net.arcs.len() {
        return false;
    }
    let mut balance = vec![0i64; net.num_nodes];
    for (a, &f) in net.arcs.iter().zip(flow) {
        if f < 0 || f > a.cap {
            return false;
        }
        balance[a.from] -= f;
        balance[a.to] += f;
    }
    (0..net.num_nodes).all(|u| {
        if u == net.source {
            balance[u] == -value
        } else if u == net.sink {
            balance[u] == value
        } else {
            balance[u] == 0
        }
    })
}

/// Whether every subtree below a root child holds only sources or only
/// predators.
pub fn is_source_separating(inst: &Instance) -> bool {
    let t = &inst.tree;
    t.children(t.root()).iter().all(|&c| {
        let off = t.offspring(c);
        off.iter().all(|x| inst.web.is_source(x)) || off.iter().all(|x| !inst.web.is_source(x))
    })
}

/// Whether every component of the food-web has at most two taxa.
pub fn is_isolated_arcs(inst: &Instance) -> bool {
    let web = &inst.web;
    (0..inst.n()).all(|x| web.prey(x).len() + web.pred(x).len() <= 1)
}

struct Gadget {
    net: FlowNetwork,
    taxon_arc: Vec<Vec<usize>>,
}

/// Network for a fixed number `kp` of chosen predators.
fn gadget(inst: &Instance, predator_side: &[bool], kp: usize) -> Gadget {
    let t = &inst.tree;
    let k = inst.k as i64;
    let nv = t.num_vertices();
    // Node layout: s, nu, then one node per tree vertex on the predator side
    // and one per tree vertex on the source side. The two roots are distinct.
    let s = 0;
    let nu = 1;
    let pred_node = |v: usize| 2 + v;
    let src_node = |v: usize| 2 + nv + v;
    let sink = src_node(t.root());
    let mut net = FlowNetwork::new(2 + 2 * nv, s, sink);
    net.add_arc(s, pred_node(t.root()), kp as i64, 0);
    net.add_arc(s, nu, k - 2 * kp as i64, 0);
    // Taxon x is chosen iff flow passes one of taxon_arc[x].
    let mut taxon_arc = vec![Vec::new(); inst.n()];
    for v in t.edges() {
        let p = t.parent(v).unwrap();
        let w = t.weight(v) as i64;
        if predator_side[v] {
            let a = net.add_arc(pred_node(p), pred_node(v), 1, -w);
            let b = net.add_arc(pred_node(p), pred_node(v), k - 1, 0);
            if let Some(x) = t.vertex_taxon(v) {
                taxon_arc[x].extend([a, b]);
            }
        } else {
            let a = net.add_arc(src_node(v), src_node(p), 1, -w);
            let b = net.add_arc(src_node(v), src_node(p), k - 1, 0);
            if let Some(x) = t.vertex_taxon(v) {
                taxon_arc[x].extend([a, b]);
                net.add_arc(nu, src_node(v), k, 0);
            }
        }
    }
    for (prey, predator) in inst.web.arcs() {
        let a = net.add_arc(pred_node(t.taxon_vertex(predator)), src_node(t.taxon_vertex(prey)), 1, 0);
        taxon_arc[predator].push(a);
    }
    Gadget { net, taxon_arc }
}

/// Whether each tree vertex has only predators below it.
fn predator_sides(inst: &Instance) -> Vec<bool> {
    let t = &inst.tree;
    let mut side = vec![true; t.num_vertices()];
    for &v in t.preorder().iter().rev() {
        side[v] = match t.vertex_taxon(v) {
            Some(x) => !inst.web.is_source(x),
            None => t.children(v).iter().all(|&c| side[c]),
        };
    }
    side
}

fn check(inst: &Instance) -> Result<()> {
    if !is_isolated_arcs(inst) {
        return precondition("flow solver needs a food-web of isolated arcs");
    }
    if !is_source_separating(inst) {
        return precondition("flow solver needs a source-separating instance");
    }
    Ok(())
}

/// Maximum diversity viable set of at most `k` taxa.
pub fn best_by_source_separating_flow(inst: &Instance) -> Result<Solution> {
    check(inst)?;
    if inst.k >= inst.n() {
        return Ok(inst.solution(TaxaSet::full(inst.n())));
    }
    if inst.k == 0 {
        return Ok(inst.solution(inst.empty_set()));
    }
    let predator_side = predator_sides(inst);
    let mut best = inst.solution(inst.empty_set());
    for kp in 0..=inst.k / 2 {
        let g = gadget(inst, &predator_side, kp);
        let Some(res) = min_cost_flow(&g.net, (inst.k - kp) as i64)? else {
            continue;
        };
        let set = TaxaSet::from_ids(
            inst.n(),
            (0..inst.n()).filter(|&x| g.taxon_arc[x].iter().any(|&a| res.flow[a] > 0)),
        );
        let sol = inst.solution(set);
        debug_assert!(sol.pd_value as i64 >= -res.cost);
        if sol.pd_value > best.pd_value {
            best = sol;
        }
    }
    Ok(best)
}

/// PDD on source-separating instances with a food-web of isolated arcs.
pub fn solve_pdd_source_separating_flow(inst: &Instance) -> Result<Decision> {
    let best = best_by_source_separating_flow(inst)?;
    debug_assert!(inst.with_params(inst.k, 0).check(&best.taxa));
    Ok(if best.pd_value >= inst.d { Decision::Yes(best) } else { Decision::No })
}
