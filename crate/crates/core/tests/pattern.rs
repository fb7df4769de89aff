mod common;

use common::*;
use pdd::colorcoding::CcConfig;
use pdd::generators::TreeShape;
use pdd::model::*;
use pdd::oracle::brute_force_decide;
use pdd::pattern::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

const RED: u32 = 1;
const BLUE: u32 = 2;
const GREEN: u32 = 3;
const ORANGE: u32 = 4;
const DARK: u32 = 5;
const CYAN: u32 = 6;
const YELLOW: u32 = 7;
const GRAY: u32 = 8;

/// Builds a colored instance from `(name, parent, weight, color)` rows; the
/// first row is the root. Leaves become taxa in row order.
fn colored(rows: &[(&str, &str, u64, u32)], arcs: &[(&str, &str)], k: usize, d: u64) -> (Instance, Vec<u32>) {
    let idx = |nm: &str| rows.iter().position(|r| r.0 == nm).unwrap();
    let parent: Vec<Option<usize>> = rows.iter().map(|r| (!r.1.is_empty()).then(|| idx(r.1))).collect();
    let leaf = |v: usize| !parent.iter().any(|p| *p == Some(v));
    let mut taxa = vec![None; rows.len()];
    let mut next = 0;
    for v in 1..rows.len() {
        if leaf(v) {
            taxa[v] = Some(next);
            next += 1;
        }
    }
    let tree = PhyloTree::from_parts(
        parent,
        rows.iter().map(|r| r.2).collect(),
        rows.iter().map(|r| r.0.to_string()).collect(),
        taxa,
    )
    .unwrap();
    let id = |nm: &str| tree.vertex_taxon(idx(nm)).unwrap();
    let arcs: Vec<(usize, usize)> = arcs.iter().map(|(a, b)| (id(a), id(b))).collect();
    let web = FoodWeb::new(tree.num_taxa(), &arcs).unwrap();
    (Instance::new(tree, web, k, d).unwrap(), rows.iter().map(|r| r.3).collect())
}

fn colored_example() -> (Instance, Vec<u32>) {
    colored(
        &[
            ("r", "", 0, RED),
            ("c1", "r", 6, BLUE),
            ("c4", "r", 1, BLUE),
            ("c2", "r", 3, GREEN),
            ("c3", "r", 1, ORANGE),
            ("c5", "r", 2, ORANGE),
            ("c11", "c1", 4, DARK),
            ("c41", "c4", 5, DARK),
            ("c42", "c4", 2, DARK),
            ("c30", "c3", 4, CYAN),
            ("c31", "c3", 2, CYAN),
            ("c32", "c3", 3, YELLOW),
            ("c321", "c32", 1, GRAY),
            ("c322", "c32", 1, GRAY),
            ("c51", "c5", 2, CYAN),
            ("c52", "c5", 2, YELLOW),
            ("c521", "c52", 2, GRAY),
        ],
        &[],
        4,
        0,
    )
}

/// Pattern matching the colored example; returns it with the index of the yellow vertex.
fn example_pattern() -> (PatternTree, usize) {
    // 0 red, 1 blue, 2 green, 3 orange, 4 dark, 5 cyan, 6 yellow, 7 gray
    let p = PatternTree::new(
        vec![None, Some(0), Some(0), Some(0), Some(1), Some(3), Some(3), Some(6)],
        vec![RED, BLUE, GREEN, ORANGE, DARK, CYAN, YELLOW, GRAY],
    )
    .unwrap();
    (p, 6)
}

fn edge_weight(ci: &ColoredInstance, name: &str) -> (String, u64) {
    let t = &ci.instance.tree;
    let v = (0..t.num_vertices()).find(|&v| t.name(v) == name).unwrap();
    (t.name(t.parent(v).unwrap()).to_string(), t.weight(v))
}

#[test]
fn contraction_reweights_example() {
    let (inst, colors) = colored_example();
    let (pattern, yellow) = example_pattern();
    let ci = ColoredInstance::new(&inst, colors).unwrap();
    let ready = apply_pattern_rules(&ci, &pattern);
    assert_eq!(ready.instance, inst, "the example is already reduced");
    let (after, p2) = rr_contract_internal_at(&ready, &pattern, yellow).unwrap();
    let expect = [("c30", 4), ("c31", 2), ("c32", 4), ("c51", 2), ("c52", 4)];
    for (nm, w) in expect {
        assert_eq!(edge_weight(&after, nm), ("r".to_string(), w), "{nm}");
    }
    for nm in ["c11", "c41", "c42", "c2", "c321", "c322", "c521"] {
        assert_eq!(edge_weight(&after, nm), edge_weight(&ci, nm), "{nm}");
    }
    assert_eq!(after.instance.tree.num_vertices(), inst.tree.num_vertices() - 2);
    assert_eq!(p2.len(), 7);
    assert_eq!(p2.children(p2.root()).len(), 4);
}

#[test]
fn full_contraction_preserves_matching_diversity() {
    let (inst, colors) = colored_example();
    let (pattern, _) = example_pattern();
    let ci = ColoredInstance::new(&inst, colors.clone()).unwrap();
    let (red, p) = rr_contract_internal(&ci, &pattern).unwrap();
    assert!(p.is_star() && red.instance.tree.is_star());
    let n = inst.n();
    let mut matched = 0;
    for m in 1u32..(1 << n) {
        let s = TaxaSet::from_ids(n, (0..n).filter(|i| m >> i & 1 == 1));
        if !respects_pattern(&inst.tree, &colors, &s, &pattern) {
            continue;
        }
        matched += 1;
        let local: Vec<usize> = s.iter().map(|t| red.back.iter().position(|&b| b == t).unwrap()).collect();
        let local = TaxaSet::from_ids(red.instance.n(), local);
        assert_eq!(red.instance.tree.diversity(&local), inst.tree.diversity(&s));
    }
    assert!(matched > 0);
    // Best matching set: c11, c2, c30, c321.
    let best = set(&inst, &["c11", "c2", "c30", "c321"]);
    assert!(respects_pattern(&inst.tree, &colors, &best, &pattern));
    assert_eq!(inst.tree.diversity(&best), 22);
    let sol = solve_pdd_pattern(&inst.with_params(4, 22), &pattern, &colors).unwrap();
    assert!(inst.with_params(4, 22).check(&sol.witness().unwrap().taxa));
    assert!(!solve_pdd_pattern(&inst.with_params(3, 22), &pattern, &colors).unwrap().is_yes());
}

#[test]
fn edge_rule_examples() {
    let (inst, colors) = colored(
        &[("r", "", 0, RED), ("u", "r", 1, BLUE), ("a", "u", 2, GREEN), ("b", "u", 2, GREEN), ("c", "r", 3, GREEN)],
        &[],
        2,
        1,
    );
    let ci = ColoredInstance::new(&inst, colors).unwrap();
    // No red -> blue pattern edge: everything under u goes.
    let no_blue = PatternTree::new(vec![None, Some(0)], vec![RED, GREEN]).unwrap();
    let out = rr_pattern_edge_original(&ci, &no_blue);
    assert_eq!(out.instance.tree.taxon_names(), vec!["c"]);
    // Pattern pairs cover the tree: identity.
    let full = PatternTree::new(vec![None, Some(0), Some(1), Some(0)], vec![RED, BLUE, GREEN, GREEN]).unwrap();
    assert_eq!(rr_pattern_edge_original(&ci, &full).instance, inst);
    // red -> yellow required, but the root has no yellow child: all removed.
    let need = PatternTree::new(vec![None, Some(0)], vec![RED, YELLOW]).unwrap();
    assert_eq!(rr_pattern_edge_required(&ci, &need).instance.n(), 0);
    // blue -> gray required: u loses its subtree, then the root lacks its
    // required blue child and the cascade empties the tree.
    let gray = PatternTree::new(vec![None, Some(0), Some(1), Some(0)], vec![RED, BLUE, GRAY, GREEN]).unwrap();
    assert_eq!(rr_pattern_edge_required(&ci, &gray).instance.n(), 0);
    assert_eq!(rr_pattern_edge_required(&ci, &full).instance, inst);
}

#[test]
fn food_web_rule_examples() {
    let inst = pdd::cli::parse_document("#tree\n(a:1,b:1,c:1)r;\n#web\na b\nb c\n#params k=3 D=1\n").unwrap();
    let ci = ColoredInstance::new(&inst, vec![0; 4]).unwrap();
    assert_eq!(rr_restrict_food_web(&ci).instance, inst);
    let b = TaxaSet::from_ids(3, [inst.taxon_id("b").unwrap()]);
    let out = rr_restrict_food_web(&ci.remove_taxa(&b));
    assert_eq!(out.instance.tree.taxon_names(), vec!["a"]);
    assert_eq!(out.back, vec![inst.taxon_id("a").unwrap()]);
}

#[test]
fn labeled_tree_counts() {
    assert_eq!(enumerate_labeled_rooted_trees(1).unwrap().count(), 1);
    assert_eq!(enumerate_labeled_rooted_trees(2).unwrap().count(), 2);
    for i in 1..=6usize {
        let all: Vec<PatternTree> = enumerate_labeled_rooted_trees(i).unwrap().collect();
        assert_eq!(all.len(), i.pow(i as u32 - 1), "i={i}");
        let distinct: HashSet<&PatternTree> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|p| p.len() == i && p.is_colorful()));
    }
    assert!(matches!(enumerate_labeled_rooted_trees(12), Err(pdd::PddError::Refusal(_))));
}

#[test]
fn pattern_solver_guards() {
    let (inst, colors) = colored_example();
    let (pattern, _) = example_pattern();
    let mut wrong = colors.clone();
    wrong[0] = BLUE;
    assert!(!solve_pdd_pattern(&inst, &pattern, &wrong).unwrap().is_yes());
    let single = PatternTree::single(RED);
    let z = solve_pdd_pattern(&inst.with_params(0, 0), &single, &colors).unwrap();
    assert_eq!(z.witness().unwrap().taxa.len(), 0);
    assert!(!solve_pdd_pattern(&inst.with_params(0, 1), &single, &colors).unwrap().is_yes());
    let absent = PatternTree::new(vec![None, Some(0)], vec![RED, 99]).unwrap();
    assert!(!solve_pdd_pattern(&inst, &absent, &colors).unwrap().is_yes());
}

/// Random colored instance with a pattern read off the spanning tree of a
/// random viable set, so that at least one matching set exists.
fn random_colored(seed: u64) -> (Instance, Vec<u32>, PatternTree) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 + seed as usize % 6;
    let inst = random(n, shape_of(seed), 0.3, seed).with_params(1 + seed as usize % 3, 0);
    let t = &inst.tree;
    let viable: Vec<TaxaSet> = (1u32..(1 << n))
        .map(|m| TaxaSet::from_ids(n, (0..n).filter(|i| m >> i & 1 == 1)))
        .filter(|s| s.len() <= inst.k && naive_viable(&inst.web, s))
        .collect();
    let s = &viable[rng.gen_range(0..viable.len())];
    let mut verts = vec![t.root()];
    verts.extend(s.iter().map(|x| t.taxon_vertex(x)));
    let (span, _) = t.spanning_subtree(&verts).unwrap();
    let i = span.len() as u32;
    let mut colors: Vec<u32> = (0..t.num_vertices()).map(|_| rng.gen_range(1..=i)).collect();
    for (c, &v) in span.iter().enumerate() {
        colors[v] = c as u32 + 1;
    }
    let parent = span.iter().map(|&v| t.parent(v).and_then(|p| span.iter().position(|&w| w == p))).collect();
    let p = PatternTree::new(parent, span.iter().map(|&v| colors[v]).collect()).unwrap();
    (inst, colors, p)
}

#[test]
fn rules_keep_matching_solutions() {
    let mut checked = 0;
    for seed in 0..400u64 {
        let (inst, colors, pattern) = random_colored(seed);
        let ci = ColoredInstance::new(&inst, colors.clone()).unwrap();
        let steps = [
            rr_pattern_edge_original(&ci, &pattern),
            rr_pattern_edge_required(&ci, &pattern),
            rr_restrict_food_web(&ci),
            apply_pattern_rules(&ci, &pattern),
        ];
        let (full, p) = rr_contract_internal(&ci, &pattern).unwrap();
        assert!(p.is_star() && full.instance.tree.is_star(), "seed {seed}");
        let n = inst.n();
        for m in 1u32..(1 << n) {
            let s = TaxaSet::from_ids(n, (0..n).filter(|i| m >> i & 1 == 1));
            if s.len() > inst.k || !naive_viable(&inst.web, &s) || !respects_pattern(&inst.tree, &colors, &s, &pattern) {
                continue;
            }
            checked += 1;
            for red in steps.iter().chain(std::iter::once(&full)) {
                let local: Option<Vec<usize>> =
                    s.iter().map(|t| red.back.iter().position(|&b| b == t)).collect();
                let local = TaxaSet::from_ids(red.instance.n(), local.expect("matching set survives"));
                assert!(naive_viable(&red.instance.web, &local), "seed {seed}");
                assert_eq!(red.instance.tree.diversity(&local), inst.tree.diversity(&s), "seed {seed}");
            }
            let d = inst.tree.diversity(&s);
            let dec = solve_pdd_pattern(&inst.with_params(inst.k, d), &pattern, &colors).unwrap();
            assert!(inst.with_params(inst.k, d).check(&dec.witness().expect("matching set exists").taxa));
        }
    }
    assert!(checked > 100, "only {checked} matching sets");
}

#[test]
fn pattern_solver_witnesses_are_sound() {
    for seed in 0..300u64 {
        let (inst, colors, pattern) = random_colored(seed);
        let d = (seed % 13) as u64;
        let probe = inst.with_params(inst.k, d);
        if let Decision::Yes(s) = solve_pdd_pattern(&probe, &pattern, &colors).unwrap() {
            assert!(probe.check(&s.taxa), "seed {seed}");
        }
    }
}

#[test]
fn k_height_examples() {
    let cat = caterpillar(2, 11);
    let got = solve_pdd_by_k_height(&cat, &CcConfig::exact()).unwrap();
    assert_eq!(got.witness().unwrap().taxa, set(&cat, &["a", "c"]));
    assert!(!solve_pdd_by_k_height(&cat.with_params(1, 8), &CcConfig::exact()).unwrap().is_yes());
    let z = solve_pdd_by_k_height(&cat.with_params(0, 0), &CcConfig::exact()).unwrap();
    assert!(z.witness().unwrap().taxa.is_empty());
}

#[test]
fn k_height_matches_oracle() {
    let mut tested = 0;
    for seed in 0..2000u64 {
        if tested == 200 {
            break;
        }
        let shape = if seed % 3 == 0 { TreeShape::Star } else { shape_of(seed) };
        let n = 2 + seed as usize % 6;
        let inst = random(n, shape, 0.3, seed)
            .with_params(1 + seed as usize % 3, (seed * 5 % 17) as u64);
        if inst.tree.height() > 2 {
            continue;
        }
        tested += 1;
        let got = solve_pdd_by_k_height(&inst, &CcConfig::exact()).unwrap();
        assert_eq!(got.is_yes(), brute_force_decide(&inst).unwrap().is_yes(), "seed {seed}");
        if let Decision::Yes(s) = got {
            assert!(inst.check(&s.taxa));
        }
    }
    assert_eq!(tested, 200);
}
