//! Instance generators: seeded random instances and the constructive
//! reductions from Vertex Cover (cubic graphs), Red-Blue Non-Blocker and Set
//! Cover, each producing a PDD instance equivalent to its source problem.

use crate::error::{precondition, PddError, Result};
use crate::model::{FoodWeb, Instance, PhyloTree, TaxaSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Shape of the random phylogenetic tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeShape {
    Star,
    Caterpillar,
    Random,
}

/// Parameters of [`gen_random`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomParams {
    pub n: usize,
    /// Probability of an arc between two taxa that are ordered compatibly.
    pub density: f64,
    pub min_weight: u64,
    pub max_weight: u64,
    pub shape: TreeShape,
    /// `k = round(k_fraction · n)`.
    pub k_fraction: f64,
    /// `D = round(d_fraction · PD(X))`.
    pub d_fraction: f64,
    pub seed: u64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            n: 8,
            density: 0.25,
            min_weight: 1,
            max_weight: 5,
            shape: TreeShape::Random,
            k_fraction: 0.5,
            d_fraction: 0.5,
            seed: 0,
        }
    }
}

/// The source problem of a generated instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    VertexCover { vertices: usize, edges: Vec<(usize, usize)>, k: usize },
    RedBlueNonblocker { red: usize, blue: usize, edges: Vec<(usize, usize)>, k: usize },
    SetCover { universe: usize, sets: Vec<Vec<usize>>, k: usize },
}

/// A generated instance together with the statement it is certified for.
#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: Instance,
    pub spec: GeneratorSpec,
    /// The equivalence the construction guarantees.
    pub contract: &'static str,
}

fn taxon_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("t{i}")).collect()
}

/// Tree built from `(parent, weight, taxon)` triples listed in preorder.
struct TreeSketch {
    parent: Vec<Option<usize>>,
    weight: Vec<u64>,
    names: Vec<String>,
    taxa: Vec<Option<usize>>,
}

impl TreeSketch {
    fn new() -> Self {
        TreeSketch {
            parent: vec![None],
            weight: vec![0],
            names: vec!["root".into()],
            taxa: vec![None],
        }
    }

    fn add(&mut self, parent: usize, weight: u64, name: String, taxon: Option<usize>) -> usize {
        self.parent.push(Some(parent));
        self.weight.push(weight);
        self.names.push(name);
        self.taxa.push(taxon);
        self.parent.len() - 1
    }

    fn build(self) -> Result<PhyloTree> {
        PhyloTree::from_parts(self.parent, self.weight, self.names, self.taxa)
    }
}

/// Seeded random instance. Arcs follow a random topological order, so the
/// web is acyclic by construction.
pub fn gen_random(p: &RandomParams) -> Result<Instance> {
    if p.n == 0 {
        return precondition("random instance needs at least one taxon");
    }
    if p.min_weight == 0 || p.min_weight > p.max_weight {
        return precondition("weights must satisfy 1 <= min_weight <= max_weight");
    }
    if !(0.0..=1.0).contains(&p.density) {
        return precondition("density must lie in [0, 1]");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n = p.n;
    let names = taxon_names(n);
    let w = |rng: &mut ChaCha8Rng| rng.gen_range(p.min_weight..=p.max_weight);
    let mut sk = TreeSketch::new();
    match p.shape {
        TreeShape::Star => {
            for (t, name) in names.iter().enumerate() {
                let wt = w(&mut rng);
                sk.add(0, wt, name.clone(), Some(t));
            }
        }
        TreeShape::Caterpillar => {
            let mut spine = 0;
            for t in 0..n {
                let wt = w(&mut rng);
                sk.add(spine, wt, names[t].clone(), Some(t));
                if t + 2 < n {
                    let wt = w(&mut rng);
                    spine = sk.add(spine, wt, String::new(), None);
                }
            }
        }
        TreeShape::Random => {
            // Agglomerate random groups of two or three subtrees until one is left.
            #[derive(Clone)]
            enum Node {
                Leaf(usize),
                Inner(Vec<Node>),
            }
            let mut pool: Vec<Node> = (0..n).map(Node::Leaf).collect();
            while pool.len() > 1 {
                pool.shuffle(&mut rng);
                let take = if pool.len() >= 3 && rng.gen_bool(0.3) { 3 } else { 2 };
                let group: Vec<Node> = pool.drain(pool.len() - take..).collect();
                pool.push(Node::Inner(group));
            }
            let top = match pool.pop().unwrap() {
                Node::Inner(ch) => ch,
                leaf => vec![leaf],
            };
            fn place(
                sk: &mut TreeSketch,
                parent: usize,
                node: &Node,
                names: &[String],
                w: &mut dyn FnMut() -> u64,
            ) {
                match node {
                    Node::Leaf(t) => {
                        sk.add(parent, w(), names[*t].clone(), Some(*t));
                    }
                    Node::Inner(ch) => {
                        let v = sk.add(parent, w(), String::new(), None);
                        for c in ch {
                            place(sk, v, c, names, w);
                        }
                    }
                }
            }
            let mut draw = || w(&mut rng);
            for c in &top {
                place(&mut sk, 0, c, &names, &mut draw);
            }
        }
    }
    let tree = sk.build()?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if p.density > 0.0 && rng.gen_bool(p.density) {
                arcs.push((order[i], order[j]));
            }
        }
    }
    let web = FoodWeb::new(n, &arcs)?;
    let k = ((p.k_fraction * n as f64).round() as usize).min(n);
    let d = (p.d_fraction * tree.total_weight() as f64).round() as u64;
    Instance::new(tree, web, k, d)
}

fn checked_mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b)
        .ok_or_else(|| PddError::Overflow(format!("{a} * {b} exceeds u64")))
}

/// Vertex Cover on a cubic graph as PDD. Each vertex becomes a taxon; each
/// edge `e = {u, v}` becomes an inner vertex of weight `N-1` with two leaf
/// taxa `[u,e]` and `[v,e]`, the first eaten from `u` and the second from
/// `v`. With `k' = |E| + k` and `D = N·|E| + k`, the graph has a vertex cover
/// of size at most `k` exactly when the instance is a yes-instance.
///
/// `n_big` defaults to `|X| + 2`.
pub fn gen_from_vertex_cover(
    vertices: usize,
    edges: &[(usize, usize)],
    k: usize,
    n_big: Option<u64>,
) -> Result<Generated> {
    let mut deg = vec![0usize; vertices];
    for &(u, v) in edges {
        if u >= vertices || v >= vertices || u == v {
            return precondition(format!("invalid edge ({u}, {v})"));
        }
        deg[u] += 1;
        deg[v] += 1;
    }
    if let Some(v) = deg.iter().position(|&d| d != 3) {
        return precondition(format!("graph is not cubic: vertex {v} has degree {}", deg[v]));
    }
    let m = edges.len();
    let n_taxa = vertices + 2 * m;
    let big = n_big.unwrap_or(n_taxa as u64 + 2);
    if big < 2 {
        return precondition("N must be at least 2");
    }
    let mut sk = TreeSketch::new();
    for v in 0..vertices {
        sk.add(0, 1, format!("v{v}"), Some(v));
    }
    let mut arcs = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        let e = sk.add(0, big - 1, format!("e{i}"), None);
        let tu = vertices + 2 * i;
        let tv = tu + 1;
        sk.add(e, 1, format!("v{u}_e{i}"), Some(tu));
        sk.add(e, 1, format!("v{v}_e{i}"), Some(tv));
        arcs.push((u, tu));
        arcs.push((v, tv));
    }
    let tree = sk.build()?;
    let web = FoodWeb::new(n_taxa, &arcs)?;
    let d = checked_mul(big, m as u64)?
        .checked_add(k as u64)
        .ok_or_else(|| PddError::Overflow("threshold exceeds u64".into()))?;
    Ok(Generated {
        instance: Instance::new(tree, web, m + k, d)?,
        spec: GeneratorSpec::VertexCover { vertices, edges: edges.to_vec(), k },
        contract: "the graph has a vertex cover of size at most k iff the instance is yes",
    })
}

/// Red-Blue Non-Blocker on a bipartite graph as s-PDD. Red vertices become
/// weight-1 taxa, blue vertices weight-2 taxa, and every edge `{r, b}` an arc
/// from `r` to `b`, so a blue taxon survives only with a surviving red
/// neighbour. `k' = |V| - k`, `D = 2|V_b| + |V_r| - k`.
///
/// Edges are `(red index, blue index)`. Every blue vertex needs a red
/// neighbour; otherwise the source problem is trivially no while the blue
/// taxon would be a free source.
pub fn gen_from_red_blue_nonblocker(
    red: usize,
    blue: usize,
    edges: &[(usize, usize)],
    k: usize,
) -> Result<Generated> {
    let total = red + blue;
    if k > total {
        return precondition(format!("k = {k} exceeds |V| = {total}"));
    }
    let mut has_red = vec![false; blue];
    for &(r, b) in edges {
        if r >= red || b >= blue {
            return precondition(format!("invalid edge ({r}, {b})"));
        }
        has_red[b] = true;
    }
    if let Some(b) = has_red.iter().position(|&h| !h) {
        return precondition(format!("blue vertex {b} has no red neighbour"));
    }
    let mut names: Vec<String> = (0..red).map(|r| format!("r{r}")).collect();
    names.extend((0..blue).map(|b| format!("b{b}")));
    let weights: Vec<u64> = (0..total).map(|i| if i < red { 1 } else { 2 }).collect();
    let tree = PhyloTree::star(&names, &weights)?;
    let arcs: Vec<(usize, usize)> = edges.iter().map(|&(r, b)| (r, red + b)).collect();
    let web = FoodWeb::new(total, &arcs)?;
    let d = (2 * blue + red - k) as u64;
    Ok(Generated {
        instance: Instance::new(tree, web, total - k, d)?,
        spec: GeneratorSpec::RedBlueNonblocker { red, blue, edges: edges.to_vec(), k },
        contract: "some S of at least k red vertices leaves every blue vertex a red neighbour \
                   outside S iff the instance is yes",
    })
}

/// Set Cover as s-PDD: one weight-1 taxon per set, one weight-2 taxon per
/// element, and an arc from each set to each of its elements. `k' = k + |U|`
/// and `D = k + 2|U|`. A budget above the number of sets is clamped to it.
pub fn gen_from_set_cover(universe: usize, sets: &[Vec<usize>], k: usize) -> Result<Generated> {
    let q = sets.len();
    let mut covered = TaxaSet::new(universe);
    for s in sets {
        for &u in s {
            if u >= universe {
                return precondition(format!("element {u} outside the universe"));
            }
            covered.insert(u);
        }
    }
    if covered.len() != universe {
        let miss = (0..universe).find(|&u| !covered.contains(u)).unwrap();
        return precondition(format!("element {miss} is in no set"));
    }
    let k_eff = k.min(q);
    let mut names: Vec<String> = (0..q).map(|i| format!("Q{i}")).collect();
    names.extend((0..universe).map(|u| format!("u{u}")));
    let weights: Vec<u64> = (0..q + universe).map(|i| if i < q { 1 } else { 2 }).collect();
    let tree = PhyloTree::star(&names, &weights)?;
    let mut arcs = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        for &u in s {
            arcs.push((i, q + u));
        }
    }
    let web = FoodWeb::new(q + universe, &arcs)?;
    Ok(Generated {
        instance: Instance::new(tree, web, k_eff + universe, (k_eff + 2 * universe) as u64)?,
        spec: GeneratorSpec::SetCover { universe, sets: sets.to_vec(), k },
        contract: "the universe is covered by at most k sets iff the instance is yes",
    })
}

/// Dispatches a [`GeneratorSpec`].
pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    match spec {
        GeneratorSpec::VertexCover { vertices, edges, k } => {
            gen_from_vertex_cover(*vertices, edges, *k, None)
        }
        GeneratorSpec::RedBlueNonblocker { red, blue, edges, k } => {
            gen_from_red_blue_nonblocker(*red, *blue, edges, *k)
        }
        GeneratorSpec::SetCover { universe, sets, k } => gen_from_set_cover(*universe, sets, *k),
    }
}

/// Reduction families with a random payload generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionFamily {
    VertexCover,
    RedBlueNonblocker,
    SetCover,
}

/// Random cubic graph on `vertices` vertices by the pairing model.
pub fn random_cubic_graph(vertices: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    if vertices < 4 || vertices % 2 == 1 {
        return precondition("a cubic graph needs an even number of at least 4 vertices");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..3 * vertices).map(|p| p / 3).collect();
    loop {
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> =
            points.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        edges.sort_unstable();
        let simple = edges.iter().all(|&(u, v)| u != v) && edges.windows(2).all(|w| w[0] != w[1]);
        if simple {
            return Ok(edges);
        }
    }
}

/// Random source-problem payload of roughly `size` vertices or elements.
pub fn random_spec(family: ReductionFamily, size: usize, seed: u64) -> Result<GeneratorSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    Ok(match family {
        ReductionFamily::VertexCover => {
            let vertices = size.max(4) & !1;
            let edges = random_cubic_graph(vertices, seed)?;
            GeneratorSpec::VertexCover { vertices, edges, k: rng.gen_range(0..=vertices) }
        }
        ReductionFamily::RedBlueNonblocker => {
            let red = (size / 2).max(1);
            let blue = size.saturating_sub(red).max(1);
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for b in 0..blue {
                edges.push((rng.gen_range(0..red), b));
                for r in 0..red {
                    if rng.gen_bool(0.3) && !edges.contains(&(r, b)) {
                        edges.push((r, b));
                    }
                }
            }
            GeneratorSpec::RedBlueNonblocker { red, blue, edges, k: rng.gen_range(0..=red + blue) }
        }
        ReductionFamily::SetCover => {
            let universe = size.max(1);
            let q = rng.gen_range(1..=universe);
            let mut sets = vec![Vec::new(); q];
            for u in 0..universe {
                sets[rng.gen_range(0..q)].push(u);
                for s in sets.iter_mut() {
                    if rng.gen_bool(0.25) && !s.contains(&u) {
                        s.push(u);
                    }
                }
            }
            GeneratorSpec::SetCover { universe, sets, k: rng.gen_range(0..=q) }
        }
    })
}
