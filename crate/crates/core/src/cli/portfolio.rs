//! Solver selection, run records and witness verification.

use crate::colorcoding::{solve_spdd_by_k, CcConfig, Mode};
use crate::diversity::{solve_pdd_by_d, MAX_D};
use crate::error::{refuse, PddError, Result};
use crate::model::{viability_certificate, Decision, Instance, Solution, TaxaSet};
use crate::oracle::{brute_force_decide_with_budget, brute_force_optimum_with_budget, DEFAULT_BUDGET};
use crate::pattern::solve_pdd_by_k_height;
use crate::preprocess::standard_pipeline;
use crate::structural::{
    best_by_cluster_modulator, best_by_cocluster_modulator, best_by_source_separating_flow,
    best_by_treewidth, build_nice_tree_decomposition, find_modulator, is_isolated_arcs,
    is_source_separating, solve_pdd_by_cocluster_modulator, solve_pdd_outforest_by_kbar,
    solve_pdd_source_separating_flow, solve_spdd_by_cluster_modulator, solve_spdd_by_treewidth,
    GraphClass, NiceTreeDecomposition,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Solver identifiers accepted by `--algorithm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Auto,
    Oracle,
    CcK,
    Pattern,
    D,
    Cluster,
    Cocluster,
    Tw,
    Flow,
    Outforest,
}

impl Algorithm {
    pub const SOLVERS: [Algorithm; 9] = [
        Algorithm::Oracle,
        Algorithm::CcK,
        Algorithm::Pattern,
        Algorithm::D,
        Algorithm::Cluster,
        Algorithm::Cocluster,
        Algorithm::Tw,
        Algorithm::Flow,
        Algorithm::Outforest,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Oracle => "oracle",
            Algorithm::CcK => "cc-k",
            Algorithm::Pattern => "pattern",
            Algorithm::D => "d",
            Algorithm::Cluster => "cluster",
            Algorithm::Cocluster => "cocluster",
            Algorithm::Tw => "tw",
            Algorithm::Flow => "flow",
            Algorithm::Outforest => "outforest",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        std::iter::once(Algorithm::Auto)
            .chain(Algorithm::SOLVERS)
            .find(|a| a.id() == s)
            .ok_or_else(|| format!("unknown algorithm '{s}'"))
    }
}

/// Selection thresholds. Every limit is an estimated number of elementary
/// steps (table cells, enumerated sets) the solver may spend.
#[derive(Clone, Copy, Debug)]
pub struct Policy {
    pub algorithm: Algorithm,
    pub cc: CcConfig,
    /// Largest estimated cost any specialized solver may have.
    pub budget: f64,
    /// Instances with at most this many taxa go straight to the oracle.
    pub oracle_max_n: usize,
    /// Subsets the oracle may enumerate before refusing.
    pub oracle_budget: u64,
    /// Largest modulator searched for.
    pub max_modulator: usize,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            algorithm: Algorithm::Auto,
            cc: CcConfig::exact(),
            budget: 1e9,
            oracle_max_n: 12,
            oracle_budget: DEFAULT_BUDGET,
            max_modulator: 6,
        }
    }
}

/// Structural parameters of an instance.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub n: usize,
    pub k: usize,
    pub d: u64,
    pub kbar: usize,
    pub dbar: u64,
    pub star: bool,
    pub height: usize,
    pub d_cluster: Option<usize>,
    pub d_cocluster: Option<usize>,
    pub width: usize,
    pub max_prey: usize,
    pub source_separating: bool,
    pub isolated_arcs: bool,
}

/// Everything the portfolio learned about an instance before solving.
pub struct Analysis {
    pub params: Parameters,
    pub cluster_modulator: Option<TaxaSet>,
    pub cocluster_modulator: Option<TaxaSet>,
    pub decomposition: NiceTreeDecomposition,
}

pub fn analyze(inst: &Instance, policy: &Policy) -> Result<Analysis> {
    let web = &inst.web;
    let cl = find_modulator(web, GraphClass::Cluster, policy.max_modulator);
    let co = find_modulator(web, GraphClass::CoCluster, policy.max_modulator);
    let decomposition = build_nice_tree_decomposition(web)?;
    let params = Parameters {
        n: inst.n(),
        k: inst.k,
        d: inst.d,
        kbar: inst.kbar(),
        dbar: inst.dbar(),
        star: inst.tree.is_star(),
        height: inst.tree.height(),
        d_cluster: cl.as_ref().map(|m| m.size()),
        d_cocluster: co.as_ref().map(|m| m.size()),
        width: decomposition.width(),
        max_prey: (0..inst.n()).map(|x| web.prey(x).len()).max().unwrap_or(0),
        source_separating: is_source_separating(inst),
        isolated_arcs: is_isolated_arcs(inst),
    };
    Ok(Analysis {
        params,
        cluster_modulator: cl.map(|m| m.deletion),
        cocluster_modulator: co.map(|m| m.deletion),
        decomposition,
    })
}

fn subsets_up_to(n: usize, k: usize) -> f64 {
    let mut term = 1.0;
    let mut total = 1.0;
    for i in 0..k.min(n) {
        term *= (n - i) as f64 / (i + 1) as f64;
        total += term;
    }
    total
}

/// Estimated cost of `alg`, or `None` when its preconditions fail.
pub fn estimate(alg: Algorithm, p: &Parameters) -> Option<f64> {
    let n = p.n.max(1) as f64;
    let k = p.k.min(p.n) as f64;
    match alg {
        Algorithm::Auto => None,
        Algorithm::Oracle => Some(subsets_up_to(p.n, p.k) * n),
        Algorithm::CcK => p.star.then(|| (2.0 * std::f64::consts::E).powf(k + 1.0) * n * (k + 1.0)),
        Algorithm::Pattern => {
            let i = (k * p.height as f64 + 1.0).min(n * 2.0);
            (i <= 6.0).then(|| i.powf(i - 1.0) * (2.0 * std::f64::consts::E).powf(i) * n)
        }
        Algorithm::D => (p.d <= MAX_D).then(|| {
            let d = p.d as f64;
            (2.0 * std::f64::consts::E).powf(d + k) * n
        }),
        Algorithm::Cluster => {
            let d = p.d_cluster? as f64;
            p.star.then(|| 4f64.powf(d) * n * (k + 1.0) * (k + 1.0))
        }
        Algorithm::Cocluster => {
            let d = p.d_cocluster?;
            (d <= 16).then(|| 6f64.powi(d as i32) * n * n * n * (k + 1.0) * (k + 1.0))
        }
        Algorithm::Tw => p.star.then(|| 9f64.powi(p.width as i32 + 1) * 4.0 * n * (k + 1.0)),
        Algorithm::Flow => (p.source_separating && p.isolated_arcs).then(|| n * n * n * (k + 1.0)),
        Algorithm::Outforest => (p.max_prey <= 1).then(|| 8f64.powi(p.kbar as i32) * n * n),
    }
}

/// Applicable specialized solvers within budget, cheapest first. The oracle
/// is never part of the plan; it is only the fallback.
pub fn plan(p: &Parameters, policy: &Policy) -> Vec<Algorithm> {
    let mut cands: Vec<(f64, Algorithm)> = Algorithm::SOLVERS[1..]
        .iter()
        .filter_map(|&a| estimate(a, p).filter(|&c| c <= policy.budget).map(|c| (c, a)))
        .collect();
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    cands.into_iter().map(|(_, a)| a).collect()
}

fn modulator(a: &Option<TaxaSet>, class: &str) -> Result<TaxaSet> {
    a.clone().ok_or_else(|| PddError::Refusal(format!("no small {class} modulator found")))
}

/// Runs one solver on the decision problem.
pub fn run_decision(inst: &Instance, alg: Algorithm, an: &Analysis, policy: &Policy) -> Result<Decision> {
    let cc = &policy.cc;
    match alg {
        Algorithm::Auto => refuse("auto is not a solver"),
        Algorithm::Oracle => brute_force_decide_with_budget(inst, policy.oracle_budget),
        Algorithm::CcK => solve_spdd_by_k(inst, cc),
        Algorithm::Pattern => solve_pdd_by_k_height(inst, cc),
        Algorithm::D => solve_pdd_by_d(inst, cc),
        Algorithm::Cluster => solve_spdd_by_cluster_modulator(inst, &modulator(&an.cluster_modulator, "cluster")?),
        Algorithm::Cocluster => {
            solve_pdd_by_cocluster_modulator(inst, &modulator(&an.cocluster_modulator, "co-cluster")?)
        }
        Algorithm::Tw => solve_spdd_by_treewidth(inst, &an.decomposition),
        Algorithm::Flow => solve_pdd_source_separating_flow(inst),
        Algorithm::Outforest => solve_pdd_outforest_by_kbar(inst, cc),
    }
}

/// Maximum diversity of a viable set of at most `k` taxa with one solver.
/// Solvers without a native optimization mode are driven by binary search
/// over the threshold.
pub fn run_optimum(inst: &Instance, alg: Algorithm, an: &Analysis, policy: &Policy) -> Result<Solution> {
    match alg {
        Algorithm::Oracle => return brute_force_optimum_with_budget(inst, policy.oracle_budget),
        Algorithm::Cluster => return best_by_cluster_modulator(inst, &modulator(&an.cluster_modulator, "cluster")?),
        Algorithm::Cocluster => {
            return best_by_cocluster_modulator(inst, &modulator(&an.cocluster_modulator, "co-cluster")?)
        }
        Algorithm::Tw => return best_by_treewidth(inst, &an.decomposition),
        Algorithm::Flow => return best_by_source_separating_flow(inst),
        _ => {}
    }
    let mut best = inst.solution(inst.empty_set());
    let mut hi = inst.tree.total_weight() + 1;
    while best.pd_value + 1 < hi {
        let mid = best.pd_value + (hi - best.pd_value) / 2;
        match run_decision(&inst.with_params(inst.k, mid), alg, an, policy)? {
            Decision::Yes(s) => best = s,
            Decision::No => hi = mid,
        }
    }
    Ok(best)
}

/// Outcome of one solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_digest: String,
    pub algorithm: Algorithm,
    pub mode: Mode,
    pub seed: u64,
    pub decision: String,
    pub witness: Option<Vec<String>>,
    pub pd_value: Option<u64>,
    /// Maximum diversity, present when an optimization run was requested.
    pub optimum: Option<u64>,
    pub wall_ms: f64,
    pub applied_reductions: Vec<String>,
    pub parameters: Parameters,
}

/// 64-bit FNV-1a digest of the serialized instance, as hex.
pub fn digest(inst: &Instance) -> String {
    let text = super::write_document(inst);
    let h = text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    format!("{h:016x}")
}

/// Checks a claimed witness against the instance and rebuilds its certificate.
fn verified(inst: &Instance, sol: &Solution) -> Result<Solution> {
    if !inst.check(&sol.taxa) {
        return Err(PddError::Domain("solver produced a witness that does not verify".into()));
    }
    let mut s = inst.solution(sol.taxa.clone());
    s.certificate = viability_certificate(&inst.web, &s.taxa);
    Ok(s)
}

fn reduce(inst: &Instance) -> (Instance, Vec<usize>, Vec<String>, Option<Solution>) {
    let (red, report) = standard_pipeline(inst);
    let mut applied = Vec::new();
    if !report.removed_taxa.is_empty() {
        applied.push(format!("reachability-prune({})", report.removed_taxa.len()));
    }
    if report.early_yes.is_some() {
        applied.push("heavy-edge-accept".into());
    }
    (red.instance, red.back, applied, report.early_yes)
}

/// Solves the decision problem (and, with `optimize`, the optimization
/// problem) under `policy`. Every witness in the record is verified.
pub fn portfolio_solve(inst: &Instance, policy: &Policy, optimize: bool) -> Result<RunRecord> {
    let start = Instant::now();
    let (work, back, applied, early) = reduce(inst);
    let lift = |s: &Solution| inst.solution(TaxaSet::from_ids(inst.n(), s.taxa.iter().map(|t| back[t])));
    let an = if work.n() > 0 { Some(analyze(&work, policy)?) } else { None };
    let params = match &an {
        Some(a) => Parameters { n: inst.n(), k: inst.k, d: inst.d, kbar: inst.kbar(), dbar: inst.dbar(), ..a.params.clone() },
        None => Parameters { n: inst.n(), k: inst.k, d: inst.d, kbar: inst.kbar(), dbar: inst.dbar(), ..Default::default() },
    };
    let order: Vec<Algorithm> = match (&an, policy.algorithm) {
        (None, _) => vec![],
        (Some(_), Algorithm::Auto) if work.n() <= policy.oracle_max_n => vec![Algorithm::Oracle],
        (Some(a), Algorithm::Auto) => {
            let mut p = plan(&a.params, policy);
            p.push(Algorithm::Oracle);
            p
        }
        (Some(_), alg) => vec![alg],
    };
    let mut used = policy.algorithm;
    let mut outcome: Option<(Decision, Option<u64>)> = None;
    if an.is_none() {
        let empty = inst.solution(inst.empty_set());
        let dec = if inst.check(&empty.taxa) { Decision::Yes(empty) } else { Decision::No };
        outcome = Some((dec, optimize.then_some(0)));
        used = Algorithm::Oracle;
    } else if let (Some(sol), false, Algorithm::Auto) = (&early, optimize, policy.algorithm) {
        outcome = Some((Decision::Yes(sol.clone()), None));
        used = Algorithm::Auto;
    }
    let mut last_err = None;
    if outcome.is_none() {
        let a = an.as_ref().expect("analysis exists for nonempty instances");
        for alg in order {
            let res = if optimize {
                run_optimum(&work, alg, a, policy).map(|best| {
                    let best = lift(&best);
                    let dec = if best.pd_value >= inst.d { Decision::Yes(best.clone()) } else { Decision::No };
                    (dec, Some(best.pd_value))
                })
            } else {
                run_decision(&work, alg, a, policy).map(|d| match d {
                    Decision::Yes(s) => (Decision::Yes(lift(&s)), None),
                    Decision::No => (Decision::No, None),
                })
            };
            match res {
                Ok(r) => {
                    outcome = Some(r);
                    used = alg;
                    break;
                }
                Err(e @ (PddError::Refusal(_) | PddError::Precondition(_))) if policy.algorithm == Algorithm::Auto => {
                    last_err = Some(e)
                }
                Err(e) => return Err(e),
            }
        }
    }
    let Some((decision, optimum)) = outcome else {
        let why = last_err.map_or(String::new(), |e| format!(" (last attempt: {e})"));
        return refuse(format!("no applicable solver{why}"));
    };
    let witness = match &decision {
        Decision::Yes(s) => Some(verified(inst, s)?),
        Decision::No => None,
    };
    Ok(RunRecord {
        instance_digest: digest(inst),
        algorithm: used,
        mode: policy.cc.mode,
        seed: policy.cc.seed,
        decision: if witness.is_some() { "yes" } else { "no" }.into(),
        pd_value: witness.as_ref().map(|s| s.pd_value),
        witness: witness.as_ref().map(|s| inst.names_of(&s.taxa)),
        optimum,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        applied_reductions: applied,
        parameters: params,
    })
}

/// Per-predicate verdict on a claimed solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub size: usize,
    pub size_ok: bool,
    pub viable: bool,
    /// Arcs `(prey, predator)` feeding every non-source member, by name.
    pub certificate: Option<Vec<(String, String)>>,
    pub pd: u64,
    pub pd_ok: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.size_ok && self.viable && self.pd_ok
    }
}

pub fn verify(inst: &Instance, set: &TaxaSet) -> VerifyReport {
    let cert = viability_certificate(&inst.web, set);
    let name = |t: usize| inst.tree.taxon_name(t).to_string();
    let pd = inst.tree.diversity(set);
    VerifyReport {
        size: set.len(),
        size_ok: set.len() <= inst.k,
        viable: cert.is_some(),
        certificate: cert.map(|c| c.into_iter().map(|(a, b)| (name(a), name(b))).collect()),
        pd,
        pd_ok: pd >= inst.d,
    }
}
