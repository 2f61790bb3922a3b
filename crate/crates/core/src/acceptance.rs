//! The acceptance suite: guarantee and property checks on seeded desk-scale
//! instances, scored against exhaustive reference values.
//!
//! Criteria sharing runs (1 and 5; 3, 4, 6 and 7) compute them once per
//! process. Every report carries the failures it found, so a failing
//! criterion says why.

use std::fmt;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::continuous_greedy::{dscg, DscgConfig, Surrogate};
use crate::error::{Error, Result};
use crate::hardness::{path_graph, random_bipartite, verify_family_properties, LayeredInstance};
use crate::harness::baseline::{brute_force_opt, BRUTE_FORCE_CAP};
use crate::harness::generate::{self, small_coverage_instance, small_cut_instance};
use crate::harness::instance::{AnyObjective, Instance, MatroidSpec, ObjectiveSpec};
use crate::harness::order::StreamOrder;
use crate::local_search::{greedy_base, local_search_pass, multi_pass_local_search, pass_guarantee_gap};
use crate::matroid::{best_independent_subset, find_axiom_violation, ElementId, Matroid};
use crate::multilinear::{coverage_f, estimate_f_with_error, summarize, EstimatorConfig, FractionalPoint, Multilinear};
use crate::objective::{find_submodularity_violation, CoverageFunction, SubmodularFn};
use crate::rng::{mix64, CounterRng};
use crate::rounding::{swap_round, ConvexCombination, RoundingConfig};
use crate::single_pass::{run_single_pass, Mode, SinglePassConfig};
use crate::two_player::{run_two_player, TwoPlayerConfig};

/// Absolute slack for exact comparisons.
const SLACK: f64 = 1e-9;

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    /// Measured quantities, one line.
    pub summary: String,
    pub failures: Vec<String>,
    /// Set when the criterion fails and every failure falls in a known
    /// case the guarantee does not cover.
    pub known_issue: Option<String>,
}

impl CriterionReport {
    fn new(id: usize, title: &'static str, summary: String, failures: Vec<String>) -> Self {
        CriterionReport { id, title, passed: failures.is_empty(), summary, failures, known_issue: None }
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} criterion {:>2} ({}): {}", self.id, self.title, self.summary)?;
        if let Some(issue) = &self.known_issue {
            write!(f, "\n    known issue: {issue}")?;
        }
        for failure in self.failures.iter().take(5) {
            write!(f, "\n    {failure}")?;
        }
        if self.failures.len() > 5 {
            write!(f, "\n    ... and {} more", self.failures.len() - 5)?;
        }
        Ok(())
    }
}

pub const CRITERIA: usize = 12;

/// Runs criterion `id` (1-based).
pub fn criterion(id: usize) -> Option<CriterionReport> {
    Some(match id {
        1 => single_pass_monotone(),
        2 => single_pass_non_monotone(),
        3 => dscg_ratio(),
        4 => dscg_round_progress(),
        5 => single_pass_memory(),
        6 => local_search_pass_bound(),
        7 => local_search_never_fails(),
        8 => two_player_ratio(),
        9 => rounding_is_lossless(),
        10 => estimator_accuracy(),
        11 => hardness_family(),
        12 => matroid_axioms(),
        _ => return None,
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERIA).filter_map(criterion).collect()
}

type Outcome<T> = std::result::Result<T, String>;

fn ratio(value: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        // `+ 0.0` turns a -0 cut value into 0.
        value / opt + 0.0
    } else {
        1.0
    }
}

/// Value of `solution` recomputed from scratch, after checking independence.
fn checked_value<M: Matroid + ?Sized, F: SubmodularFn + ?Sized>(m: &M, f: &F, solution: &[ElementId]) -> Result<f64> {
    if !m.is_independent(solution)? {
        return Err(Error::Internal(format!("solution {solution:?} is dependent")));
    }
    Ok(f.eval(solution))
}

fn coverage_of(inst: &Instance) -> &CoverageFunction {
    inst.objective.coverage().expect("generated instance has a coverage objective")
}

fn random_base<M: Matroid + ?Sized>(m: &M, rng: &mut CounterRng) -> Vec<ElementId> {
    let mut order: Vec<ElementId> = (0..m.ground_size()).collect();
    order.shuffle(rng);
    greedy_base(m, &order)
}

fn min_of(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(f64::INFINITY, f64::min)
}

// Single-pass runs shared by criteria 1, 2 and 5.

struct SinglePassRun {
    label: String,
    ratio: f64,
    max_stored: usize,
    memory_bound: usize,
    /// Every subset is independent.
    free_matroid: bool,
}

const MONOTONE_INSTANCES: u64 = 200;
const MONOTONE_EPSILON: f64 = 0.05;
const CUT_INSTANCES: u64 = 100;
const CUT_EPSILON: f64 = 0.05;

fn single_pass_run(
    inst: &Instance,
    oracle: Multilinear<'_>,
    cfg: SinglePassConfig,
    order: &StreamOrder,
    opt: f64,
    rounding: RoundingConfig,
    label: String,
) -> Outcome<SinglePassRun> {
    let run = || -> Result<SinglePassRun> {
        let stream = order.resolve(inst.f())?;
        let out = run_single_pass(cfg, &inst.matroid, oracle, &stream, &rounding)?;
        let value = checked_value(&inst.matroid, inst.f(), &out.solution)?;
        Ok(SinglePassRun {
            label: label.clone(),
            ratio: ratio(value, opt),
            max_stored: out.stats.max_stored,
            memory_bound: out.stats.memory_bound,
            free_matroid: inst.matroid.rank_total() == inst.ground_size(),
        })
    };
    run().map_err(|e| format!("{label}: {e}"))
}

fn monotone_case(i: u64) -> Vec<Outcome<SinglePassRun>> {
    let seed = mix64(0xC1, i);
    let setup = || -> Result<(Instance, f64, SinglePassConfig)> {
        let inst = Instance::from_file(small_coverage_instance(seed, 6, 16))?;
        let (_, opt) = brute_force_opt(&inst.matroid, inst.f(), BRUTE_FORCE_CAP)?;
        Ok((inst, opt, SinglePassConfig::new(MONOTONE_EPSILON, Mode::Monotone)?))
    };
    let (inst, opt, cfg) = match setup() {
        Ok(s) => s,
        Err(e) => return vec![Err(format!("coverage instance {i}: {e}"))],
    };
    let oracle = Multilinear::Coverage(coverage_of(&inst));
    let rounding = RoundingConfig { trials: RoundingConfig::DEFAULT_TRIALS, seed };
    [StreamOrder::Random(seed), StreamOrder::IdDescending, StreamOrder::SingletonDescending]
        .iter()
        .map(|order| single_pass_run(&inst, oracle, cfg, order, opt, rounding, format!("coverage {i}, {order}")))
        .collect()
}

fn monotone_runs() -> &'static [Outcome<SinglePassRun>] {
    static RUNS: OnceLock<Vec<Outcome<SinglePassRun>>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let per: Vec<Vec<_>> = (0..MONOTONE_INSTANCES).into_par_iter().map(monotone_case).collect();
        per.into_iter().flatten().collect()
    })
}

fn cut_case(i: u64) -> Outcome<SinglePassRun> {
    let seed = mix64(0xC2, i);
    let setup = || -> Result<(Instance, f64, SinglePassConfig, EstimatorConfig)> {
        let inst = Instance::from_file(small_cut_instance(seed, 6, 12))?;
        let (_, opt) = brute_force_opt(&inst.matroid, inst.f(), BRUTE_FORCE_CAP)?;
        let cfg = SinglePassConfig::new(CUT_EPSILON, Mode::NonMonotone)?;
        Ok((inst, opt, cfg, EstimatorConfig::new(20_000, seed)?))
    };
    let (inst, opt, cfg, est) = setup().map_err(|e| format!("cut instance {i}: {e}"))?;
    let oracle = Multilinear::Sampled(inst.f(), est);
    let rounding = RoundingConfig { trials: 64, seed };
    single_pass_run(&inst, oracle, cfg, &StreamOrder::Random(seed), opt, rounding, format!("cut {i}"))
}

fn cut_runs() -> &'static [Outcome<SinglePassRun>] {
    static RUNS: OnceLock<Vec<Outcome<SinglePassRun>>> = OnceLock::new();
    RUNS.get_or_init(|| (0..CUT_INSTANCES).into_par_iter().map(cut_case).collect())
}

fn errors<T>(runs: &[Outcome<T>]) -> Vec<String> {
    runs.iter().filter_map(|r| r.as_ref().err().cloned()).collect()
}

fn oks<T>(runs: &[Outcome<T>]) -> impl Iterator<Item = &T> {
    runs.iter().filter_map(|r| r.as_ref().ok())
}

/// Criterion 1: monotone single-pass ratio on every run.
pub fn single_pass_monotone() -> CriterionReport {
    let runs = monotone_runs();
    let threshold = Mode::Monotone.ratio() - MONOTONE_EPSILON - SLACK;
    let mut failures = errors(runs);
    for r in oks(runs) {
        if r.ratio < threshold {
            failures.push(format!("{}: ratio {:.4} < {threshold:.4}", r.label, r.ratio));
        }
    }
    let summary = format!(
        "{} runs, min ratio {:.4}, threshold {threshold:.4}",
        runs.len(),
        min_of(oks(runs).map(|r| r.ratio))
    );
    CriterionReport::new(1, "single-pass monotone ratio", summary, failures)
}

/// Criterion 2: non-monotone single-pass ratio with Monte-Carlo slack.
///
/// On a free matroid the bucket window is wider than `m`, so every element
/// lands in every candidate set and the averaged point is `1_N`, worth
/// `f(N)`. For a cut function that is 0. The bound relating the averaged
/// point to the accumulated one needs monotonicity there, so runs on free
/// matroids are reported but flagged as outside the guarantee.
pub fn single_pass_non_monotone() -> CriterionReport {
    let runs = cut_runs();
    let target = Mode::NonMonotone.ratio() - CUT_EPSILON - 0.02;
    let floor = 0.10;
    let mut failures = errors(runs);
    let mut unexplained = failures.len();
    let ratios: Vec<f64> = oks(runs).map(|r| r.ratio).collect();
    let meeting = ratios.iter().filter(|&&r| r >= target - SLACK).count();
    let share = meeting as f64 / runs.len() as f64;
    if share < 0.95 {
        failures.push(format!("only {meeting}/{} runs reach {target:.4}", runs.len()));
        unexplained += 1;
    }
    let mut free = 0;
    for r in oks(runs) {
        if r.ratio < floor {
            let note = if r.free_matroid { " (free matroid)" } else { "" };
            failures.push(format!("{}: ratio {:.4} < {floor}{note}", r.label, r.ratio));
            if r.free_matroid {
                free += 1;
            } else {
                unexplained += 1;
            }
        }
    }
    let summary = format!(
        "{} runs, {:.1}% at ratio >= {target:.4}, min ratio {:.4}",
        runs.len(),
        100.0 * share,
        min_of(ratios.iter().copied())
    );
    let mut report = CriterionReport::new(2, "single-pass non-monotone ratio", summary, failures);
    if !report.passed && unexplained == 0 {
        report.known_issue = Some(format!(
            "all {free} runs below {floor} use a free matroid: every candidate set is the whole ground set, \
             whose cut value is 0"
        ));
    }
    report
}

/// Criterion 5: the stored-element bound on every run of criteria 1 and 2.
pub fn single_pass_memory() -> CriterionReport {
    let runs: Vec<&Outcome<SinglePassRun>> = monotone_runs().iter().chain(cut_runs()).collect();
    let mut failures: Vec<String> = runs.iter().filter_map(|r| r.as_ref().err().cloned()).collect();
    let mut worst: f64 = 0.0;
    for r in runs.iter().filter_map(|r| r.as_ref().ok()) {
        worst = worst.max(r.max_stored as f64 / r.memory_bound.max(1) as f64);
        if r.max_stored > r.memory_bound {
            failures.push(format!("{}: stored {} > bound {}", r.label, r.max_stored, r.memory_bound));
        }
    }
    let summary = format!("{} runs, peak stored / bound at most {worst:.3}", runs.len());
    CriterionReport::new(5, "single-pass memory bound", summary, failures)
}

// Continuous greedy runs shared by criteria 3, 4, 6 and 7.

const DSCG_INSTANCES: u64 = 100;
const DSCG_EPSILON: f64 = 0.2;

#[derive(Default)]
struct Checks {
    count: usize,
    violations: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.violations.push(describe());
        }
    }

    fn merge(&mut self, other: Checks) {
        self.count += other.count;
        self.violations.extend(other.violations);
    }
}

struct DscgCase {
    label: String,
    ratio: f64,
    passes: usize,
    /// Per-round progress inequality.
    progress: Checks,
    /// Pass inequality on each local-search pass, against the surrogate.
    pass_bound: Checks,
    /// Local-search output against the surrogate optimum.
    first_fifth: Checks,
}

fn dscg_case(i: u64) -> Outcome<DscgCase> {
    let label = format!("dscg {i}");
    let seed = mix64(0xC3, i);
    let run = || -> Result<DscgCase> {
        let inst = Instance::from_file(small_coverage_instance(seed, 6, 16))?;
        let m = &inst.matroid;
        let cov = coverage_of(&inst);
        let oracle = Multilinear::Coverage(cov);
        let n = inst.ground_size();
        let (opt_set, opt) = brute_force_opt(m, cov, BRUTE_FORCE_CAP)?;
        let stream = StreamOrder::Random(seed).resolve(cov)?;
        let cfg = DscgConfig::new(DSCG_EPSILON)?;
        let out = dscg(&cfg, m, oracle, &stream, &RoundingConfig { trials: 64, seed })?;
        let value = checked_value(m, cov, &out.solution)?;

        let eps = cfg.epsilon;
        let mut progress = Checks::default();
        for (t, r) in out.rounds.iter().enumerate() {
            let rhs = eps * ((1.0 - 3.0 * eps) * opt - r.after);
            progress.check(r.after - r.before >= rhs - SLACK, || {
                format!("{label} round {t}: gain {:.6} < {rhs:.6}", r.after - r.before)
            });
        }

        let opt_base = m.extend_to_base(&opt_set)?;
        let all: Vec<ElementId> = (0..n).collect();
        let mut x = FractionalPoint::zero(n);
        let mut pass_bound = Checks::default();
        let mut first_fifth = Checks::default();
        for (t, r) in out.rounds.iter().enumerate() {
            let g = Surrogate::new(oracle, x.clone(), eps)?;
            let (g_best, g_opt) = best_independent_subset(m, &all, &mut |s| g.eval(s));
            let g_base = m.extend_to_base(&g_best)?;
            let g_empty = g.eval(&[]);
            let tol = SLACK * g_opt.max(1.0);
            for (k, pass) in r.search.passes.iter().enumerate() {
                for (name, b) in [("surrogate optimum", &g_base), ("objective optimum", &opt_base)] {
                    let gap = pass_guarantee_gap(&g, pass, b);
                    pass_bound.check(gap >= -tol, || format!("{label} round {t} pass {k} vs {name}: gap {gap:.3e}"));
                }
            }
            let (got, want) = (r.search.value - g_empty, (g_opt - g_empty) / 5.0);
            first_fifth.check(got >= want - tol, || format!("{label} round {t}: g(T|∅) {got:.6} < {want:.6}"));
            x.add_scaled(&r.direction, eps)?;
        }
        Ok(DscgCase {
            label: label.clone(),
            ratio: ratio(value, opt),
            passes: out.total_passes,
            progress,
            pass_bound,
            first_fifth,
        })
    };
    run().map_err(|e| format!("{label}: {e}"))
}

fn dscg_runs() -> &'static [Outcome<DscgCase>] {
    static RUNS: OnceLock<Vec<Outcome<DscgCase>>> = OnceLock::new();
    RUNS.get_or_init(|| (0..DSCG_INSTANCES).into_par_iter().map(dscg_case).collect())
}

/// Criterion 3: continuous greedy ratio, with the pass constant reported.
pub fn dscg_ratio() -> CriterionReport {
    let runs = dscg_runs();
    let threshold = 1.0 - (-1.0f64).exp() - DSCG_EPSILON - 0.02;
    let mut failures = errors(runs);
    for r in oks(runs) {
        if r.ratio < threshold - SLACK {
            failures.push(format!("{}: ratio {:.4} < {threshold:.4}", r.label, r.ratio));
        }
    }
    let max_passes = oks(runs).map(|r| r.passes).max().unwrap_or(0);
    let summary = format!(
        "{} runs, min ratio {:.4}, threshold {threshold:.4}, max passes {max_passes} (C = passes * eps^3 = {:.3})",
        runs.len(),
        min_of(oks(runs).map(|r| r.ratio)),
        max_passes as f64 * DSCG_EPSILON.powi(3)
    );
    CriterionReport::new(3, "continuous greedy ratio", summary, failures)
}

fn merged(runs: &[Outcome<DscgCase>], pick: impl Fn(&DscgCase) -> &Checks) -> Checks {
    let mut all = Checks { count: 0, violations: errors(runs) };
    for r in oks(runs) {
        let c = pick(r);
        all.count += c.count;
        all.violations.extend(c.violations.iter().cloned());
    }
    all
}

/// Criterion 4: per-round progress of continuous greedy against the optimum.
pub fn dscg_round_progress() -> CriterionReport {
    let checks = merged(dscg_runs(), |r| &r.progress);
    let summary = format!("{} rounds checked, {} violations", checks.count, checks.violations.len());
    CriterionReport::new(4, "continuous greedy round progress", summary, checks.violations)
}

// Standalone local search instances shared by criteria 6 and 7.

const LOCAL_SEARCH_INSTANCES: u64 = 250;
const RANDOM_BASES: usize = 20;

struct LocalSearchCase {
    pass_bound: Checks,
    never_fails: Checks,
}

fn local_search_case(i: u64) -> Outcome<LocalSearchCase> {
    let label = format!("local search {i}");
    let seed = mix64(0xC6, i);
    let run = || -> Result<LocalSearchCase> {
        let inst = Instance::from_file(small_coverage_instance(seed, 6, 16))?;
        let m = &inst.matroid;
        let f = inst.f();
        let mut rng = CounterRng::derive(seed, 1);
        let (opt_set, opt) = brute_force_opt(m, f, BRUTE_FORCE_CAP)?;
        let mut bases = vec![m.extend_to_base(&opt_set)?];
        bases.extend((0..RANDOM_BASES).map(|_| random_base(m, &mut rng)));
        let stream = StreamOrder::Random(seed).resolve(f)?;
        let s0 = random_base(m, &mut rng);
        let tol = SLACK * opt.max(1.0);

        let mut pass_bound = Checks::default();
        for c in [2.0, 1.1] {
            let pass = local_search_pass(m, f, &s0, &stream, c)?;
            for (k, b) in bases.iter().enumerate() {
                let gap = pass_guarantee_gap(f, &pass, b);
                pass_bound.check(gap >= -tol, || format!("{label} c={c} base {k}: gap {gap:.3e}"));
            }
        }

        let mut never_fails = Checks::default();
        let empty = f.eval(&[]);
        match multi_pass_local_search(m, f, &stream, 3.0 * DSCG_EPSILON / 25.0) {
            Ok(out) => {
                let (got, want) = (out.value - empty, (opt - empty) / 5.0);
                never_fails.check(got >= want - tol, || format!("{label}: f(T|∅) {got:.6} < {want:.6}"));
                for (k, pass) in out.passes.iter().enumerate() {
                    let gap = pass_guarantee_gap(f, pass, &bases[0]);
                    pass_bound.check(gap >= -tol, || format!("{label} multipass pass {k}: gap {gap:.3e}"));
                }
            }
            Err(e) => never_fails.check(false, || format!("{label}: local search failed: {e}")),
        }
        Ok(LocalSearchCase { pass_bound, never_fails })
    };
    run().map_err(|e| format!("{label}: {e}"))
}

fn local_search_runs() -> &'static [Outcome<LocalSearchCase>] {
    static RUNS: OnceLock<Vec<Outcome<LocalSearchCase>>> = OnceLock::new();
    RUNS.get_or_init(|| (0..LOCAL_SEARCH_INSTANCES).into_par_iter().map(local_search_case).collect())
}

fn merged_standalone(pick: impl Fn(&LocalSearchCase) -> &Checks) -> Checks {
    let runs = local_search_runs();
    let mut all = Checks { count: 0, violations: errors(runs) };
    for r in oks(runs) {
        let c = pick(r);
        all.count += c.count;
        all.violations.extend(c.violations.iter().cloned());
    }
    all
}

/// Criterion 6: the per-pass local search inequality, on continuous greedy
/// passes and on standalone passes.
pub fn local_search_pass_bound() -> CriterionReport {
    let mut checks = merged(dscg_runs(), |r| &r.pass_bound);
    let from_dscg = checks.count;
    checks.merge(merged_standalone(|r| &r.pass_bound));
    let summary = format!(
        "{} inequality checks ({from_dscg} within continuous greedy, {} standalone), {} violations",
        checks.count,
        checks.count - from_dscg,
        checks.violations.len()
    );
    CriterionReport::new(6, "local search pass inequality", summary, checks.violations)
}

/// Criterion 7: multi-pass local search never fails and keeps a fifth of
/// the optimum.
pub fn local_search_never_fails() -> CriterionReport {
    let mut checks = merged(dscg_runs(), |r| &r.first_fifth);
    checks.merge(merged_standalone(|r| &r.never_fails));
    let summary = format!("{} local search runs, {} violations", checks.count, checks.violations.len());
    CriterionReport::new(7, "local search never fails", summary, checks.violations)
}

// Criterion 8.

const TWO_PLAYER_INSTANCES: u64 = 50;

struct TwoPlayerCase {
    label: String,
    ratio: f64,
    message: usize,
    bound: usize,
}

fn two_player_case(i: u64) -> Outcome<TwoPlayerCase> {
    let label = format!("two-player {i}");
    let seed = mix64(0xC8, i);
    let run = || -> Result<TwoPlayerCase> {
        let inst = Instance::from_file(small_coverage_instance(seed, 6, 14))?;
        let m = &inst.matroid;
        let cov = coverage_of(&inst);
        let mut rng = CounterRng::derive(seed, 2);
        let alice: Vec<ElementId> = (0..inst.ground_size()).filter(|_| rng.random_bool(0.5)).collect();
        let cfg = TwoPlayerConfig::default();
        let (_, opt) = brute_force_opt(m, cov, BRUTE_FORCE_CAP)?;
        let out = run_two_player(m, Multilinear::Coverage(cov), &alice, &cfg)?;
        let value = checked_value(m, cov, &out.solution)?;
        Ok(TwoPlayerCase {
            label: label.clone(),
            ratio: ratio(value, opt),
            message: out.message.elements.len(),
            bound: (cfg.h + 2) * m.rank_total(),
        })
    };
    run().map_err(|e| format!("{label}: {e}"))
}

/// Criterion 8: two-player ratio and message size.
pub fn two_player_ratio() -> CriterionReport {
    let runs: Vec<Outcome<TwoPlayerCase>> = (0..TWO_PLAYER_INSTANCES).into_par_iter().map(two_player_case).collect();
    let threshold = 0.505;
    let mut failures = errors(&runs);
    for r in oks(&runs) {
        if r.ratio < threshold - SLACK {
            failures.push(format!("{}: ratio {:.4} < {threshold}", r.label, r.ratio));
        }
        if r.message > r.bound {
            failures.push(format!("{}: message of {} elements > {}", r.label, r.message, r.bound));
        }
    }
    let summary = format!(
        "{} runs, min ratio {:.4}, largest message {} elements",
        runs.len(),
        min_of(oks(&runs).map(|r| r.ratio)),
        oks(&runs).map(|r| r.message).max().unwrap_or(0)
    );
    CriterionReport::new(8, "two-player ratio", summary, failures)
}

// Criterion 9.

const ROUNDING_COMBINATIONS: u64 = 20;
const ROUNDING_TRIALS: usize = 10_000;

struct RoundingCase {
    value_checks: usize,
    marginal_checks: usize,
    violations: Vec<String>,
}

fn random_matroid_spec(kind: u64, n: usize, rng: &mut CounterRng) -> Result<MatroidSpec> {
    Ok(match kind % 3 {
        0 => MatroidSpec::Uniform { capacity: rng.random_range(1..=n) },
        1 => generate::partition(n, rng.random_range(1..=4), 3, rng),
        _ => generate::graphic(n, rng.random_range(3..=6), rng)?,
    })
}

/// The `k`-th fixed convex combination: a coverage objective over a random
/// matroid and 2 to 4 random independent sets with total weight in
/// `[0.6, 1]`.
fn fixed_combination(k: u64) -> Result<(Instance, ConvexCombination)> {
    let seed = mix64(0xC9, k);
    let mut rng = CounterRng::new(seed);
    let n = rng.random_range(5..=9);
    let matroid = random_matroid_spec(k, n, &mut rng)?;
    let objective = generate::coverage(n, rng.random_range(6..=12), 0.3, &mut rng);
    let inst = Instance::from_file(generate::file(format!("combination-{k}"), seed, n, matroid, objective))?;
    let count = rng.random_range(2..=4);
    let raw: Vec<f64> = (0..count).map(|_| rng.random_range(0.2..1.0)).collect();
    let total = rng.random_range(0.6..=1.0) / raw.iter().sum::<f64>();
    let entries = raw
        .iter()
        .map(|w| {
            let mut set = random_base(&inst.matroid, &mut rng);
            set.truncate(rng.random_range(1..=set.len()));
            (set, w * total)
        })
        .collect();
    let comb = ConvexCombination::new(n, entries)?;
    Ok((inst, comb))
}

fn rounding_case(k: u64) -> Outcome<RoundingCase> {
    let run = || -> Result<RoundingCase> {
        let (inst, comb) = fixed_combination(k)?;
        let cov = coverage_of(&inst);
        let x = comb.point()?;
        let exact = coverage_f(cov, &x)?;
        let seed = mix64(0xC9A, k);
        let rounded: Vec<Vec<ElementId>> = (0..ROUNDING_TRIALS)
            .into_par_iter()
            .map(|t| swap_round(&inst.matroid, &comb, mix64(seed, t as u64)))
            .collect::<Result<_>>()?;
        let values: Vec<f64> = rounded.iter().map(|r| cov.eval(r)).collect();
        let est = summarize(&values);
        let mut violations = Vec::new();
        if est.mean < exact - 3.0 * est.std_error - SLACK {
            violations.push(format!(
                "combination {k}: mean f(R) {:.5} < F(x) {exact:.5} - 3 * {:.5}",
                est.mean, est.std_error
            ));
        }
        let trials = ROUNDING_TRIALS as f64;
        let n = inst.ground_size();
        for e in 0..n {
            let hits = rounded.iter().filter(|r| r.contains(&e)).count() as f64;
            let (freq, p) = (hits / trials, x.get(e));
            let se = (p * (1.0 - p) / trials).sqrt();
            if (freq - p).abs() > 3.0 * se + SLACK {
                violations.push(format!(
                    "combination {k}: element {e} sampled with frequency {freq:.4}, coordinate {p:.4} (3 SE = {:.4})",
                    3.0 * se
                ));
            }
        }
        Ok(RoundingCase { value_checks: 1, marginal_checks: n, violations })
    };
    run().map_err(|e| format!("combination {k}: {e}"))
}

/// Criterion 9: swap rounding keeps the expected value and the marginals.
pub fn rounding_is_lossless() -> CriterionReport {
    let runs: Vec<Outcome<RoundingCase>> = (0..ROUNDING_COMBINATIONS).map(rounding_case).collect();
    let mut failures = errors(&runs);
    failures.extend(oks(&runs).flat_map(|r| r.violations.iter().cloned()));
    let summary = format!(
        "{} combinations x {ROUNDING_TRIALS} trials, {} value and {} marginal checks, {} outside 3 SE",
        runs.len(),
        oks(&runs).map(|r| r.value_checks).sum::<usize>(),
        oks(&runs).map(|r| r.marginal_checks).sum::<usize>(),
        failures.len()
    );
    CriterionReport::new(9, "swap rounding is lossless", summary, failures)
}

// Criterion 10.

const ESTIMATOR_POINTS: u64 = 20;
const ESTIMATOR_SEEDS: u64 = 100;
const ESTIMATOR_SAMPLES: usize = 10_000;
const SLOPE_SAMPLES: [usize; 6] = [500, 1000, 2000, 4000, 8000, 16000];
const SLOPE_SEEDS: u64 = 40;

fn estimator_point(k: u64) -> Result<(CoverageFunction, FractionalPoint)> {
    let mut rng = CounterRng::new(mix64(0xCA, k));
    let n = rng.random_range(6..=10);
    let universe = rng.random_range(10..=20);
    let ObjectiveSpec::Coverage { sets, weights } =
        generate::coverage(n, universe, 0.3, &mut rng)
    else {
        unreachable!("coverage generator returns a coverage spec")
    };
    let f = CoverageFunction::new(sets, weights)?;
    let pairs: Vec<(ElementId, f64)> = (0..n).map(|e| (e, rng.random_range(0.05..0.95))).collect();
    Ok((f, FractionalPoint::from_pairs(n, pairs)?))
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Criterion 10: Monte-Carlo error is within three standard errors for 99%
/// of (point, seed) pairs, and shrinks like `samples^-1/2`.
pub fn estimator_accuracy() -> CriterionReport {
    let mut failures = Vec::new();
    let points: Vec<(CoverageFunction, FractionalPoint)> =
        match (0..ESTIMATOR_POINTS).map(estimator_point).collect::<Result<_>>() {
            Ok(p) => p,
            Err(e) => return CriterionReport::new(10, "estimator accuracy", "setup failed".into(), vec![e.to_string()]),
        };
    let mut within = 0usize;
    let mut worst_point = usize::MAX;
    let mut total = 0usize;
    let mut rmse = vec![0.0; SLOPE_SAMPLES.len()];
    for (k, (f, x)) in points.iter().enumerate() {
        let exact = coverage_f(f, x).expect("valid point");
        let mut here = 0usize;
        for s in 0..ESTIMATOR_SEEDS {
            let cfg = EstimatorConfig::new(ESTIMATOR_SAMPLES, mix64(k as u64, s)).expect("positive sample count");
            let est = estimate_f_with_error(f, x, &cfg).expect("valid point");
            total += 1;
            if (est.mean - exact).abs() <= 3.0 * est.std_error {
                here += 1;
            }
        }
        within += here;
        worst_point = worst_point.min(here);
        for (j, &samples) in SLOPE_SAMPLES.iter().enumerate() {
            let sq: f64 = (0..SLOPE_SEEDS)
                .map(|s| {
                    let cfg = EstimatorConfig::new(samples, mix64(0xCA5, k as u64 * 1000 + s)).expect("positive");
                    let e = estimate_f_with_error(f, x, &cfg).expect("valid point").mean - exact;
                    e * e
                })
                .sum();
            rmse[j] += (sq / SLOPE_SEEDS as f64).sqrt() / points.len() as f64;
        }
    }
    let share = within as f64 / total as f64;
    if share < 0.99 {
        failures.push(format!("only {within}/{total} estimates within 3 SE"));
    }
    let xs: Vec<f64> = SLOPE_SAMPLES.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = rmse.iter().map(|r| r.ln()).collect();
    let fitted = slope(&xs, &ys);
    if (fitted + 0.5).abs() > 0.15 {
        failures.push(format!("error-vs-samples slope {fitted:.3} outside -0.5 +- 0.15"));
    }
    let summary = format!(
        "{within}/{total} ({:.2}%) within 3 SE, worst point {worst_point}/{ESTIMATOR_SEEDS}, log-log slope {fitted:.3}",
        100.0 * share
    );
    CriterionReport::new(10, "estimator accuracy", summary, failures)
}

// Criterion 11.

const HARDNESS_EPSILON: f64 = 0.1;
const HARDNESS_ALPHAS: [f64; 3] = [0.25, 0.5, 0.9];
const HARDNESS_TRIALS: usize = 10_000;

fn layered(copies: usize, graphs: Vec<Vec<(usize, usize)>>, seed: u64) -> Result<LayeredInstance> {
    let mut rng = CounterRng::new(seed);
    let inst = Instance::from_file(generate::hardness(copies, graphs, HARDNESS_EPSILON, seed, &mut rng)?)?;
    match inst.objective {
        AnyObjective::Hardness(h) => Ok(h),
        _ => Err(Error::Internal("hardness generator returned another objective".into())),
    }
}

/// Criterion 11: structural properties of the layered hard family.
pub fn hardness_family() -> CriterionReport {
    let mut failures = Vec::new();
    let (mut instances, mut exhaustive, mut sampled) = (0usize, 0usize, 0usize);
    let mut min_margin = f64::INFINITY;
    for p in 1..=3usize {
        for copies in 2..=3usize {
            let tag = format!("p={p} n={copies}");
            let per_layer = ((10 / copies) / p).max(1);
            let mut cases = vec![(format!("{tag} paths"), (0..p).map(|_| path_graph(per_layer)).collect::<Vec<_>>())];
            for r in 0..3u64 {
                let mut rng = CounterRng::new(mix64(0xCB, (p * 10 + copies) as u64 * 100 + r));
                let graphs = (0..p).map(|_| random_bipartite(3, 3, 0.5, &mut rng)).collect();
                cases.push((format!("{tag} random graphs {r}"), graphs));
            }
            for (j, (name, graphs)) in cases.into_iter().enumerate() {
                let seed = mix64(0xCB1, (p * 10 + copies) as u64 * 100 + j as u64);
                let inst = match layered(copies, graphs, seed) {
                    Ok(h) => h,
                    Err(e) => {
                        failures.push(format!("{name}: {e}"));
                        continue;
                    }
                };
                instances += 1;
                if inst.ground_size() <= 10 {
                    exhaustive += 1;
                    if let Some(v) = find_submodularity_violation(&inst, SLACK) {
                        failures.push(format!("{name}: {v}"));
                    }
                }
                for (a, &alpha) in HARDNESS_ALPHAS.iter().enumerate() {
                    match verify_family_properties(&inst, HARDNESS_EPSILON, alpha, HARDNESS_TRIALS, mix64(seed, a as u64)) {
                        Ok(report) => {
                            sampled += report.no_checks;
                            min_margin = min_margin.min(report.no_threshold - report.no_max_value);
                            failures.extend(report.violations.into_iter().map(|v| format!("{name} alpha={alpha}: {v}")));
                        }
                        Err(e) => failures.push(format!("{name} alpha={alpha}: {e}")),
                    }
                }
            }
        }
    }
    let summary = format!(
        "{instances} instances ({exhaustive} checked exhaustively), {sampled} sampled no-case sets, smallest no-case margin {min_margin:.4}"
    );
    CriterionReport::new(11, "hardness family properties", summary, failures)
}

// Criterion 12.

const MATROIDS_PER_TYPE: u64 = 50;

fn matroid_case(kind: u64, k: u64) -> Vec<String> {
    let seed = mix64(0xCC, kind * 1000 + k);
    let mut rng = CounterRng::new(seed);
    let n = rng.random_range(3..=9);
    let label = format!("{} matroid {k}", ["uniform", "partition", "graphic"][kind as usize]);
    let m = match random_matroid_spec(kind, n, &mut rng).and_then(|s| s.build(n)) {
        Ok(m) => m,
        Err(e) => return vec![format!("{label}: {e}")],
    };
    let mut failures = Vec::new();
    if let Some(v) = find_axiom_violation(&m) {
        failures.push(format!("{label}: {v}"));
    }
    for _ in 0..5 {
        let (b1, b2) = (random_base(&m, &mut rng), random_base(&m, &mut rng));
        for &u in b1.iter().filter(|u| !b2.contains(u)) {
            match m.basis_exchange(&b1, &b2, u) {
                Ok(v) => {
                    let left: Vec<ElementId> = b1.iter().map(|&e| if e == u { v } else { e }).collect();
                    let right: Vec<ElementId> = b2.iter().map(|&e| if e == v { u } else { e }).collect();
                    if !m.independent(&left) || !m.independent(&right) {
                        failures.push(format!("{label}: exchange {u} <-> {v} breaks independence"));
                    }
                }
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
        let i1: Vec<ElementId> = b1.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        match m.exchange_partition(&b1, &i1, &b2) {
            Ok((j1, j2)) => {
                let i2: Vec<ElementId> = b1.iter().copied().filter(|e| !i1.contains(e)).collect();
                let union = |a: &[ElementId], b: &[ElementId]| {
                    let mut s = a.to_vec();
                    s.extend(b.iter().filter(|e| !a.contains(e)));
                    s
                };
                if !m.independent(&union(&i1, &j2)) || !m.independent(&union(&i2, &j1)) {
                    failures.push(format!("{label}: block exchange result is dependent"));
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    failures
}

/// Criterion 12: exhaustive matroid axioms and exchange contracts on random
/// small matroids of each type.
pub fn matroid_axioms() -> CriterionReport {
    let failures: Vec<String> = (0..3u64)
        .flat_map(|kind| (0..MATROIDS_PER_TYPE).map(move |k| (kind, k)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|(kind, k)| matroid_case(kind, k))
        .collect();
    let summary = format!(
        "{} matroids ({MATROIDS_PER_TYPE} per type) checked exhaustively, {} violations",
        3 * MATROIDS_PER_TYPE,
        failures.len()
    );
    CriterionReport::new(12, "matroid axioms and exchange", summary, failures)
}
