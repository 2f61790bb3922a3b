//! Running one algorithm on one instance and reporting the result.

use std::path::Path;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::continuous_greedy::{dscg, DscgConfig};
use crate::error::{Error, Result};
use crate::harness::baseline::{brute_force_opt, offline_greedy, BRUTE_FORCE_CAP};
use crate::harness::instance::{parse_id_list, Instance};
use crate::harness::order::StreamOrder;
use crate::local_search::multi_pass_local_search;
use crate::matroid::{ElementId, Matroid};
use crate::multilinear::{EstimatorConfig, Multilinear};
use crate::objective::{CountingOracle, SubmodularFn};
use crate::rng::CounterRng;
use crate::rounding::RoundingConfig;
use crate::single_pass::{run_single_pass, Mode, SinglePassConfig};
use crate::tolerance;
use crate::two_player::{run_two_player, TwoPlayerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    SinglePass,
    Multipass,
    Dscg,
    TwoPlayer,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SinglePass => "single-pass",
            Algorithm::Multipass => "multipass",
            Algorithm::Dscg => "dscg",
            Algorithm::TwoPlayer => "two-player",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single-pass" => Ok(Algorithm::SinglePass),
            "multipass" => Ok(Algorithm::Multipass),
            "dscg" => Ok(Algorithm::Dscg),
            "two-player" => Ok(Algorithm::TwoPlayer),
            other => Err(Error::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// What the achieved value is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reference {
    None,
    BruteForce,
    Greedy,
    /// Brute force up to [`BRUTE_FORCE_CAP`] elements, greedy above.
    #[default]
    Auto,
}

/// Algorithm settings. Unset fields take algorithm-specific defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunParams {
    /// Stream order spec; `random` alone draws the permutation from `seed`.
    pub order: String,
    /// Default 0.1 for single-pass, 0.2 for dscg.
    pub epsilon: Option<f64>,
    /// Default: monotone iff the objective is.
    pub mode: Option<Mode>,
    pub samples: usize,
    pub exact_oracle: bool,
    pub seed: u64,
    pub round_trials: usize,
    /// Local search parameter for multipass.
    pub delta: f64,
    /// Alice's elements for two-player: `half`, `alternate`, `random`, or a
    /// file of ids.
    pub split: String,
    pub h: usize,
    pub reference: Reference,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            order: "id-asc".into(),
            epsilon: None,
            mode: None,
            samples: EstimatorConfig::DEFAULT_SAMPLES,
            exact_oracle: false,
            seed: 0,
            round_trials: RoundingConfig::DEFAULT_TRIALS,
            delta: 0.1,
            split: "half".into(),
            h: TwoPlayerConfig::GUARANTEED_H,
            reference: Reference::Auto,
        }
    }
}

impl RunParams {
    pub fn stream_order(&self) -> Result<StreamOrder> {
        if self.order == "random" {
            return Ok(StreamOrder::Random(self.seed));
        }
        StreamOrder::parse(&self.order)
    }

    pub fn rounding(&self) -> RoundingConfig {
        RoundingConfig { trials: self.round_trials, seed: self.seed }
    }

    pub fn estimator(&self) -> Result<EstimatorConfig> {
        EstimatorConfig::new(self.samples, self.seed)
    }

    /// Resolves `split` into Alice's element set.
    pub fn alice_elements(&self, n: usize) -> Result<Vec<ElementId>> {
        let mut ids: Vec<ElementId> = match self.split.as_str() {
            "half" => (0..n / 2).collect(),
            "alternate" => (0..n).step_by(2).collect(),
            "random" => {
                let mut rng = CounterRng::derive(self.seed, 0x5b11);
                (0..n).filter(|_| rng.random_bool(0.5)).collect()
            }
            path => parse_id_list(&std::fs::read_to_string(Path::new(path)).map_err(|e| {
                Error::Input(format!("split `{path}` is neither half/alternate/random nor a readable file: {e}"))
            })?)?,
        };
        ids.sort_unstable();
        ids.dedup();
        Ok(ids)
    }
}

/// Outcome of one run. `elapsed_ms` is only filled when timing is requested,
/// so that reports stay byte-identical across repeated runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub instance: String,
    pub ground_size: usize,
    pub rank: usize,
    pub params: RunParams,
    pub solution: Vec<ElementId>,
    pub value: f64,
    pub reference: Option<Reference>,
    pub reference_value: Option<f64>,
    pub ratio: Option<f64>,
    /// Single-pass only.
    pub max_stored: Option<usize>,
    pub memory_bound: Option<usize>,
    pub passes: usize,
    /// Set-function evaluations made by the algorithm; `None` when it only
    /// used the closed-form coverage extension.
    pub oracle_calls: Option<u64>,
    /// Per-pass values for multipass, per-round values for dscg.
    pub trace: Vec<f64>,
    /// Two-player only: number of elements Alice sends.
    pub message_size: Option<usize>,
    pub elapsed_ms: Option<f64>,
}

struct Outcome {
    solution: Vec<ElementId>,
    value: f64,
    max_stored: Option<usize>,
    memory_bound: Option<usize>,
    passes: usize,
    trace: Vec<f64>,
    message_size: Option<usize>,
    uses_set_function: bool,
}

fn execute(alg: Algorithm, inst: &Instance, params: &RunParams, f: &dyn SubmodularFn) -> Result<Outcome> {
    let m = &inst.matroid;
    let oracle = if params.exact_oracle {
        inst.oracle(true, EstimatorConfig::default())?
    } else {
        Multilinear::Sampled(f, params.estimator()?)
    };
    let stream = || params.stream_order()?.resolve(inst.f());
    let empty = Outcome {
        solution: Vec::new(),
        value: 0.0,
        max_stored: None,
        memory_bound: None,
        passes: 1,
        trace: Vec::new(),
        message_size: None,
        uses_set_function: !params.exact_oracle,
    };
    Ok(match alg {
        Algorithm::SinglePass => {
            let mode = params
                .mode
                .unwrap_or(if inst.f().is_monotone() { Mode::Monotone } else { Mode::NonMonotone });
            let cfg = SinglePassConfig::new(params.epsilon.unwrap_or(0.1), mode)?;
            let out = run_single_pass(cfg, m, oracle, &stream()?, &params.rounding())?;
            Outcome {
                solution: out.solution,
                value: out.value,
                max_stored: Some(out.stats.max_stored),
                memory_bound: Some(out.stats.memory_bound),
                ..empty
            }
        }
        Algorithm::Multipass => {
            let out = multi_pass_local_search(m, f, &stream()?, params.delta)?;
            let mut trace = vec![f.eval(&out.initial)];
            trace.extend(out.passes.iter().map(|p| p.end_value));
            Outcome {
                solution: out.base,
                value: out.value,
                passes: out.pass_count,
                trace,
                uses_set_function: true,
                ..empty
            }
        }
        Algorithm::Dscg => {
            let cfg = DscgConfig::new(params.epsilon.unwrap_or(0.2))?;
            let out = dscg(&cfg, m, oracle, &stream()?, &params.rounding())?;
            Outcome {
                solution: out.solution,
                value: out.value,
                passes: out.total_passes,
                trace: out.rounds.iter().map(|r| r.after).collect(),
                ..empty
            }
        }
        Algorithm::TwoPlayer => {
            let alice = params.alice_elements(inst.ground_size())?;
            let cfg = TwoPlayerConfig { h: params.h, ..TwoPlayerConfig::default() };
            let out = run_two_player(m, oracle, &alice, &cfg)?;
            Outcome {
                solution: out.solution,
                value: out.value,
                message_size: Some(out.message.elements.len()),
                ..empty
            }
        }
    })
}

/// Runs `alg` on `inst`, re-validates the solution (independence, and the
/// value recomputed from scratch) and compares it with the reference.
pub fn run(alg: Algorithm, inst: &Instance, params: &RunParams, timing: bool) -> Result<RunReport> {
    let counting = CountingOracle::new(inst.f());
    let start = Instant::now();
    let out = execute(alg, inst, params, &counting)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let calls = counting.calls();

    let mut solution = out.solution;
    solution.sort_unstable();
    if !inst.matroid.independent(&solution) {
        return Err(Error::Internal(format!("{} returned a dependent set {solution:?}", alg.name())));
    }
    let value = inst.f().eval(&solution);
    if (value - out.value).abs() > tolerance::TOL * value.abs().max(1.0) {
        return Err(Error::Internal(format!(
            "{} reported value {} but the solution is worth {value}",
            alg.name(),
            out.value
        )));
    }

    let n = inst.ground_size();
    let reference = match params.reference {
        Reference::Auto if n <= BRUTE_FORCE_CAP => Reference::BruteForce,
        Reference::Auto => Reference::Greedy,
        other => other,
    };
    let reference_value = match reference {
        Reference::BruteForce => Some(brute_force_opt(&inst.matroid, inst.f(), BRUTE_FORCE_CAP)?.1),
        Reference::Greedy => Some(inst.f().eval(&offline_greedy(&inst.matroid, inst.f()))),
        _ => None,
    };
    let ratio = reference_value.map(|r| if r > 0.0 { value / r } else { 1.0 });
    Ok(RunReport {
        algorithm: alg,
        instance: inst.name().to_string(),
        ground_size: n,
        rank: inst.matroid.rank_total(),
        params: params.clone(),
        solution,
        value,
        reference: reference_value.map(|_| reference),
        reference_value,
        ratio,
        max_stored: out.max_stored,
        memory_bound: out.memory_bound,
        passes: out.passes,
        oracle_calls: out.uses_set_function.then_some(calls),
        trace: out.trace,
        message_size: out.message_size,
        elapsed_ms: timing.then_some(elapsed),
    })
}
