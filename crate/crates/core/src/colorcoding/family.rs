use super::{CcConfig, Mode};
use crate::error::{precondition, refuse, Result};
use crate::model::TaxaSet;
use crate::oracle::binomial;
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Whether a family is certified or only probabilistically complete.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exactness {
    Exact,
    MonteCarlo { epsilon: f64 },
}

/// A family of colorings `[n] -> [k]`; colors are stored 1-indexed.
#[derive(Clone, Debug)]
pub struct HashFamily {
    pub n: usize,
    pub k: usize,
    pub functions: Vec<Vec<u32>>,
    pub exactness: Exactness,
}

/// A family of subsets of `[n]` realizing every trace on `k`-subsets.
#[derive(Clone, Debug)]
pub struct UniversalSet {
    pub n: usize,
    pub k: usize,
    pub sets: Vec<TaxaSet>,
    pub exactness: Exactness,
}

/// Largest `members · n` a monte-carlo family may allocate.
pub const MC_CELL_LIMIT: usize = 200_000_000;

/// Number of random members used in monte-carlo mode: `⌈e^t · t · ln(1/ε)⌉`.
pub fn monte_carlo_trials(t: usize, epsilon: f64) -> usize {
    let t = t.max(1) as f64;
    (t.exp() * t * (1.0 / epsilon).ln()).ceil().max(1.0) as usize
}

fn subset_masks(n: usize, k: usize) -> Vec<u64> {
    (0..n)
        .combinations(k)
        .map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i))
        .collect()
}

fn injective_on(f: &[u32], mask: u64) -> bool {
    let mut seen = 0u64;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        let bit = 1u64 << f[i];
        if seen & bit != 0 {
            return false;
        }
        seen |= bit;
    }
    true
}

/// Random coloring whose color classes differ in size by at most one.
fn balanced_coloring(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut f = vec![0u32; n];
    for (pos, &i) in perm.iter().enumerate() {
        f[i] = (pos % k) as u32 + 1;
    }
    f
}

/// Balanced random coloring that is injective on `mask`.
fn targeted_coloring(n: usize, k: usize, mask: u64, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut inside: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
    let mut outside: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
    inside.shuffle(rng);
    outside.shuffle(rng);
    let mut f = vec![0u32; n];
    for (pos, &i) in inside.iter().chain(outside.iter()).enumerate() {
        f[i] = (pos % k) as u32 + 1;
    }
    f
}

/// Builds an `(n, k)`-perfect hash family.
///
/// Exact mode greedily keeps random balanced colorings until every `k`-subset
/// is colorful under some member, so the result is certified by construction.
pub fn build_perfect_hash_family(n: usize, k: usize, cfg: &CcConfig) -> Result<HashFamily> {
    if k == 0 || k > n {
        return precondition(format!("perfect hash family needs 1 <= k <= n (k={k}, n={n})"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.mode {
        Mode::MonteCarlo => {
            let trials = monte_carlo_trials(k, cfg.epsilon);
            if trials.saturating_mul(n) > MC_CELL_LIMIT {
                return refuse(format!("monte-carlo ({n}, {k})-perfect hash family needs {trials} colorings"));
            }
            let functions = (0..trials)
                .map(|_| (0..n).map(|_| rng.gen_range(1..=k as u32)).collect())
                .collect();
            Ok(HashFamily {
                n,
                k,
                functions,
                exactness: Exactness::MonteCarlo { epsilon: cfg.epsilon },
            })
        }
        Mode::Exact => {
            let exact = |functions| Ok(HashFamily { n, k, functions, exactness: Exactness::Exact });
            if k == 1 {
                return exact(vec![vec![1; n]]);
            }
            if k == n {
                return exact(vec![(1..=n as u32).collect()]);
            }
            let count = binomial(n, k);
            if n > 64 || count > cfg.exact_budget {
                return refuse(format!(
                    "exact ({n}, {k})-perfect hash family needs {count} subsets verified"
                ));
            }
            let mut uncovered = subset_masks(n, k);
            let mut functions = Vec::new();
            while !uncovered.is_empty() {
                let mut best: Option<(usize, Vec<u32>)> = None;
                for attempt in 0..8 {
                    let f = if attempt == 0 {
                        targeted_coloring(n, k, uncovered[0], &mut rng)
                    } else {
                        balanced_coloring(n, k, &mut rng)
                    };
                    let hits = uncovered.iter().filter(|&&m| injective_on(&f, m)).count();
                    if best.as_ref().map_or(true, |(h, _)| hits > *h) {
                        best = Some((hits, f));
                    }
                }
                let (_, f) = best.unwrap();
                uncovered.retain(|&m| !injective_on(&f, m));
                functions.push(f);
            }
            exact(functions)
        }
    }
}

/// Exhaustively checks perfectness. Only feasible for small `n`.
pub fn is_perfect(family: &HashFamily) -> bool {
    subset_masks(family.n, family.k)
        .into_iter()
        .all(|m| family.functions.iter().any(|f| injective_on(f, m)))
}

/// Builds an `(n, k)`-universal set.
pub fn build_universal_set(n: usize, k: usize, cfg: &CcConfig) -> Result<UniversalSet> {
    if k > n {
        return precondition(format!("universal set needs k <= n (k={k}, n={n})"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random_set = |rng: &mut ChaCha8Rng| TaxaSet::from_ids(n, (0..n).filter(|_| rng.gen_bool(0.5)));
    if k == 0 {
        return Ok(UniversalSet { n, k, sets: vec![TaxaSet::new(n)], exactness: Exactness::Exact });
    }
    match cfg.mode {
        Mode::MonteCarlo => {
            let trials = ((1u64 << k.min(62)) as f64 * (1.0 / cfg.epsilon).ln()).ceil().max(1.0);
            if trials * n as f64 > MC_CELL_LIMIT as f64 {
                return refuse(format!("monte-carlo ({n}, {k})-universal set needs {trials} members"));
            }
            let sets = (0..trials as usize).map(|_| random_set(&mut rng)).collect();
            Ok(UniversalSet {
                n,
                k,
                sets,
                exactness: Exactness::MonteCarlo { epsilon: cfg.epsilon },
            })
        }
        Mode::Exact => {
            let pairs = binomial(n, k).saturating_mul(1u64 << k.min(62));
            let expected = (1u64 << k.min(62)) as f64 * ((pairs as f64).ln() + 1.0);
            if n <= 16 && (1u64 << n) as f64 <= expected {
                let sets = (0u64..1 << n)
                    .map(|m| TaxaSet::from_ids(n, (0..n).filter(|i| m >> i & 1 == 1)))
                    .collect();
                return Ok(UniversalSet { n, k, sets, exactness: Exactness::Exact });
            }
            if n > 64 || pairs > cfg.exact_budget {
                return refuse(format!("exact ({n}, {k})-universal set needs {pairs} traces verified"));
            }
            // covered[s] holds one bit per trace of subset s, indexed by rank.
            let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
            let mut covered: Vec<Vec<bool>> = vec![vec![false; 1 << k]; subsets.len()];
            let mut remaining = pairs;
            let mut sets = Vec::new();
            while remaining > 0 {
                let a = random_set(&mut rng);
                let mut fresh = 0u64;
                for (si, s) in subsets.iter().enumerate() {
                    let trace = s.iter().enumerate().fold(0usize, |m, (j, &i)| {
                        m | (usize::from(a.contains(i)) << j)
                    });
                    if !covered[si][trace] {
                        covered[si][trace] = true;
                        fresh += 1;
                    }
                }
                if fresh > 0 {
                    remaining -= fresh;
                    sets.push(a);
                }
            }
            Ok(UniversalSet { n, k, sets, exactness: Exactness::Exact })
        }
    }
}

/// Exhaustively checks universality.
pub fn is_universal(u: &UniversalSet) -> bool {
    (0..u.n).combinations(u.k).all(|s| {
        let mut seen = vec![false; 1 << u.k];
        for a in &u.sets {
            let t = s
                .iter()
                .enumerate()
                .fold(0usize, |m, (j, &i)| m | (usize::from(a.contains(i)) << j));
            seen[t] = true;
        }
        seen.into_iter().all(|b| b)
    })
}
