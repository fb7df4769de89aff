//! Shared fixtures and an independent subset-enumeration oracle.
#![allow(dead_code)]

use pdd::cli::parse_document;
use pdd::generators::{gen_random, RandomParams, TreeShape};
use pdd::model::{FoodWeb, Instance, PhyloTree, TaxaSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Star {a:3, b:5, c:2} with web {a -> b}.
pub fn instance_a(k: usize, d: u64) -> Instance {
    parse_document(&format!("#tree\n(a:3,b:5,c:2)r;\n#web\na b\n#params k={k} D={d}\n")).unwrap()
}

/// Caterpillar ((a:4,b:2)u:1,c:7)r with web {a -> b}.
pub fn caterpillar(k: usize, d: u64) -> Instance {
    parse_document(&format!("#tree\n((a:4,b:2)u:1,c:7)r;\n#web\na b\n#params k={k} D={d}\n"))
        .unwrap()
}

pub fn set(inst: &Instance, names: &[&str]) -> TaxaSet {
    inst.taxa_from_names(names).unwrap()
}

/// Diversity by explicit edge enumeration: an edge counts when some chosen
/// taxon's root path uses it.
pub fn naive_pd(tree: &PhyloTree, s: &TaxaSet) -> u64 {
    let mut used = vec![false; tree.num_vertices()];
    for t in s.iter() {
        let mut v = tree.taxon_vertex(t);
        while let Some(p) = tree.parent(v) {
            used[v] = true;
            v = p;
        }
    }
    (0..tree.num_vertices()).filter(|&v| used[v]).map(|v| tree.weight(v)).sum()
}

pub fn naive_viable(web: &FoodWeb, s: &TaxaSet) -> bool {
    s.iter().all(|x| {
        let prey = web.prey(x);
        prey.is_empty() || prey.iter().any(|&p| s.contains(p))
    })
}

/// Best (diversity, set) over all viable subsets of size at most `k` passing
/// `filter`, by plain bitmask enumeration.
pub fn naive_best(inst: &Instance, filter: impl Fn(&TaxaSet) -> bool) -> Option<(u64, TaxaSet)> {
    let n = inst.n();
    assert!(n <= 20);
    let mut best: Option<(u64, TaxaSet)> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize > inst.k {
            continue;
        }
        let s = TaxaSet::from_ids(n, (0..n).filter(|i| mask >> i & 1 == 1));
        if !naive_viable(&inst.web, &s) || !filter(&s) {
            continue;
        }
        let v = naive_pd(&inst.tree, &s);
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, s));
        }
    }
    best
}

pub fn naive_opt(inst: &Instance) -> u64 {
    naive_best(inst, |_| true).map_or(0, |(v, _)| v)
}

pub fn naive_decide(inst: &Instance) -> bool {
    naive_opt(inst) >= inst.d
}

pub fn random(n: usize, shape: TreeShape, density: f64, seed: u64) -> Instance {
    gen_random(&RandomParams {
        n,
        density,
        min_weight: 1,
        max_weight: 6,
        shape,
        k_fraction: 0.4,
        d_fraction: 0.5,
        seed,
    })
    .unwrap()
}

pub fn shape_of(seed: u64) -> TreeShape {
    match seed % 3 {
        0 => TreeShape::Star,
        1 => TreeShape::Caterpillar,
        _ => TreeShape::Random,
    }
}

/// All labeled cubic graphs on `n` vertices; with `anchored`, only those in
/// which vertex 0 is adjacent to 1, 2 and 3 (every cubic graph has such a
/// relabeling).
pub fn cubic_graphs(n: usize, anchored: bool) -> Vec<Vec<(usize, usize)>> {
    fn rec(n: usize, pairs: &[(usize, usize)], i: usize, deg: &mut [usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if i == pairs.len() {
            if deg.iter().all(|&d| d == 3) {
                out.push(cur.clone());
            }
            return;
        }
        let (a, b) = pairs[i];
        // Once every pair touching `a` is decided its degree must be 3.
        let last_for_a = pairs[i + 1..].iter().all(|&(x, _)| x != a);
        if deg[a] < 3 && deg[b] < 3 {
            deg[a] += 1;
            deg[b] += 1;
            cur.push((a, b));
            if !last_for_a || deg[a] == 3 {
                rec(n, pairs, i + 1, deg, cur, out);
            }
            cur.pop();
            deg[a] -= 1;
            deg[b] -= 1;
        }
        if !last_for_a || deg[a] == 3 {
            rec(n, pairs, i + 1, deg, cur, out);
        }
    }
    let mut deg = vec![0; n];
    let mut cur = Vec::new();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if a == 0 && anchored {
                if b <= 3 {
                    cur.push((0, b));
                    deg[0] += 1;
                    deg[b] += 1;
                }
            } else {
                pairs.push((a, b));
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &pairs, 0, &mut deg, &mut cur, &mut out);
    out
}

pub fn min_vertex_cover(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|m| edges.iter().all(|&(u, v)| m >> u & 1 == 1 || m >> v & 1 == 1))
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap()
}

/// For webs in which every prey is a source: `best[m]` is the largest
/// diversity of a viable set of at most `m` taxa. Enumerates the chosen
/// sources and completes each choice with the greedy algorithm on the tree
/// whose edges already covered are zeroed.
pub fn two_layer_profile(inst: &Instance) -> Vec<u64> {
    let t = &inst.tree;
    let web = &inst.web;
    let n = inst.n();
    let sources = web.sources();
    assert!((0..n).all(|x| web.prey(x).iter().all(|&p| web.is_source(p))));
    assert!(sources.len() <= 20);
    let mut best = vec![0u64; n + 1];
    for mask in 0u32..1 << sources.len() {
        let s = TaxaSet::from_ids(n, (0..sources.len()).filter(|i| mask >> i & 1 == 1).map(|i| sources[i]));
        let mut covered = vec![false; t.num_vertices()];
        let mut value = 0;
        let cover = |x: usize, covered: &mut Vec<bool>, apply: bool| -> u64 {
            let mut v = t.taxon_vertex(x);
            let mut gain = 0;
            while let Some(p) = t.parent(v) {
                if covered[v] {
                    break;
                }
                gain += t.weight(v);
                if apply {
                    covered[v] = true;
                }
                v = p;
            }
            gain
        };
        for x in s.iter() {
            value += cover(x, &mut covered, true);
        }
        let mut size = s.len();
        best[size] = best[size].max(value);
        let mut pool: Vec<usize> =
            (0..n).filter(|&x| !web.is_source(x) && web.prey(x).iter().any(|&p| s.contains(p))).collect();
        while !pool.is_empty() {
            let (i, g) = pool
                .iter()
                .enumerate()
                .map(|(i, &x)| (i, cover(x, &mut covered, false)))
                .max_by_key(|&(i, g)| (g, std::cmp::Reverse(i)))
                .unwrap();
            let x = pool.swap_remove(i);
            cover(x, &mut covered, true);
            value += g;
            size += 1;
            best[size] = best[size].max(value);
        }
    }
    for m in 1..=n {
        best[m] = best[m].max(best[m - 1]);
    }
    best
}

/// Red-blue non-blocker: some set of at least `k` red vertices whose removal
/// leaves every blue vertex a red neighbour.
pub fn nonblocker(red: usize, blue: usize, edges: &[(usize, usize)], k: usize) -> bool {
    (0u32..1 << red).any(|s| {
        s.count_ones() as usize >= k
            && (0..blue).all(|b| edges.iter().any(|&(r, bb)| bb == b && s >> r & 1 == 0))
    })
}

pub fn set_cover(universe: usize, sets: &[Vec<usize>], k: usize) -> bool {
    (0u32..1 << sets.len()).any(|m| {
        m.count_ones() as usize <= k
            && (0..universe).all(|u| (0..sets.len()).any(|i| m >> i & 1 == 1 && sets[i].contains(&u)))
    })
}

pub fn with_web(inst: &Instance, arcs: &[(usize, usize)], k: usize, d: u64) -> Instance {
    Instance::new(inst.tree.clone(), FoodWeb::new(inst.n(), arcs).unwrap(), k, d).unwrap()
}

pub fn bits(n: usize, mask: u64) -> TaxaSet {
    TaxaSet::from_ids(n, (0..n).filter(|i| mask >> i & 1 == 1))
}

/// Cliques on consecutive ids plus `d` extra taxa with random arcs; all arcs
/// point from smaller to larger ids.
pub fn cluster_web(n: usize, d: usize, rng: &mut ChaCha8Rng) -> (Vec<(usize, usize)>, TaxaSet) {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let y: Vec<usize> = ids[..d].to_vec();
    let mut rest: Vec<usize> = ids[d..].to_vec();
    rest.sort_unstable();
    let mut arcs = Vec::new();
    let mut i = 0;
    while i < rest.len() {
        let size = rng.gen_range(1..=3).min(rest.len() - i);
        let clique = &rest[i..i + size];
        for a in 0..size {
            for b in a + 1..size {
                arcs.push((clique[a], clique[b]));
            }
        }
        i += size;
    }
    for &v in &y {
        for u in 0..n {
            if u != v && rng.gen_bool(0.3) {
                arcs.push((u.min(v), u.max(v)));
            }
        }
    }
    (arcs, TaxaSet::from_ids(n, y))
}

/// Complete multipartite graph on the taxa outside `Y`, plus random arcs at `Y`.
pub fn cocluster_web(n: usize, d: usize, rng: &mut ChaCha8Rng) -> (Vec<(usize, usize)>, TaxaSet) {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let y: Vec<usize> = ids[..d].to_vec();
    let parts = rng.gen_range(1..=3);
    let part: Vec<usize> = (0..n).map(|_| rng.gen_range(0..parts)).collect();
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let in_y = y.contains(&a) || y.contains(&b);
            if (in_y && rng.gen_bool(0.3)) || (!in_y && part[a] != part[b]) {
                arcs.push((a, b));
            }
        }
    }
    (arcs, TaxaSet::from_ids(n, y))
}

pub fn random_sparse(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    for v in 1..n {
        if rng.gen_bool(0.8) {
            let u = rng.gen_range(0..v);
            arcs.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
        }
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            arcs.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
        }
    }
    // Keep it acyclic by orienting along a random order.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut out: Vec<(usize, usize)> =
        arcs.into_iter().map(|(a, b)| if pos[a] < pos[b] { (a, b) } else { (b, a) }).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn random_subtree(names: &[String], rng: &mut ChaCha8Rng) -> String {
    if names.len() == 1 {
        return format!("{}:{}", names[0], rng.gen_range(1..=6));
    }
    let cut = rng.gen_range(1..names.len());
    format!(
        "({},{}):{}",
        random_subtree(&names[..cut], rng),
        random_subtree(&names[cut..], rng),
        rng.gen_range(1..=6)
    )
}

/// Source-separating instance with isolated arcs.
pub fn separating_instance(n: usize, rng: &mut ChaCha8Rng, k: usize) -> Instance {
    let pairs = rng.gen_range(0..=n / 2);
    let names: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let predators: Vec<String> = names[..pairs].to_vec();
    let mut sources: Vec<String> = names[pairs..].to_vec();
    sources.shuffle(rng);
    let mut blocks = Vec::new();
    for side in [&predators, &sources] {
        let mut i = 0;
        while i < side.len() {
            let len = rng.gen_range(1..=3).min(side.len() - i);
            blocks.push(random_subtree(&side[i..i + len], rng));
            i += len;
        }
    }
    if blocks.len() == 1 {
        blocks.push(format!("pad:{}", 1));
    }
    blocks.shuffle(rng);
    let mut web = String::new();
    for i in 0..pairs {
        web.push_str(&format!("t{} t{}\n", pairs + i, i));
    }
    let text = format!("#tree\n({})r;\n#web\n{web}#params k={k} D=0\n", blocks.join(","));
    parse_document(&text).unwrap()
}
