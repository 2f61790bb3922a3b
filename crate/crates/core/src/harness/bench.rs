//! Batch experiments: a JSON plan in, one CSV row per (run, seed) out.
//!
//! ```json
//! {
//!   "runs": [
//!     { "instance": "coverage-1.json", "algorithm": "single-pass",
//!       "params": { "epsilon": 0.1, "exact_oracle": true, "order": "random" },
//!       "seeds": [0, 1, 2] }
//!   ]
//! }
//! ```
//!
//! Instance paths are relative to the plan file. Each seed overrides
//! `params.seed`; an empty `seeds` list means one run with the given params.
//! Rows can execute in parallel but are written in plan order, and a failing
//! run fills the `error` column instead of stopping the batch.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::instance::Instance;
use crate::harness::runner::{run, Algorithm, RunParams, RunReport};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Plan {
    #[serde(default)]
    pub runs: Vec<PlannedRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannedRun {
    pub instance: PathBuf,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub params: RunParams,
    #[serde(default)]
    pub seeds: Vec<u64>,
}

/// The fixed CSV columns, in order.
pub const COLUMNS: [&str; 18] = [
    "run",
    "seed",
    "instance",
    "algorithm",
    "order",
    "epsilon",
    "ground_size",
    "rank",
    "value",
    "reference_value",
    "ratio",
    "solution_size",
    "max_stored",
    "memory_bound",
    "passes",
    "oracle_calls",
    "elapsed_ms",
    "error",
];

/// One report row: the run index in the plan, its seed, and the outcome.
pub struct Row {
    pub run: usize,
    pub seed: u64,
    pub instance: String,
    pub algorithm: Algorithm,
    pub params: RunParams,
    pub outcome: std::result::Result<RunReport, String>,
}

impl Plan {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Executes every (run, seed) pair of the plan. `base` resolves relative
/// instance paths.
pub fn execute_plan(plan: &Plan, base: &Path, timing: bool) -> Vec<Row> {
    let jobs: Vec<(usize, &PlannedRun, RunParams)> = plan
        .runs
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            let seeds = if r.seeds.is_empty() { vec![r.params.seed] } else { r.seeds.clone() };
            seeds.into_iter().map(move |s| (i, r, RunParams { seed: s, ..r.params.clone() }))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(i, r, params)| {
            let path = base.join(&r.instance);
            let outcome = Instance::load(&path)
                .and_then(|inst| run(r.algorithm, &inst, &params, timing))
                .map_err(|e| e.to_string());
            Row {
                run: i,
                seed: params.seed,
                instance: r.instance.display().to_string(),
                algorithm: r.algorithm,
                params,
                outcome,
            }
        })
        .collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes `rows` as CSV with the [`COLUMNS`] header.
pub fn write_csv<W: std::io::Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        let mut rec = vec![
            row.run.to_string(),
            row.seed.to_string(),
            row.instance.clone(),
            row.algorithm.name().to_string(),
            row.params.order.clone(),
            opt(row.params.epsilon),
        ];
        match &row.outcome {
            Ok(r) => rec.extend([
                r.ground_size.to_string(),
                r.rank.to_string(),
                r.value.to_string(),
                opt(r.reference_value),
                opt(r.ratio),
                r.solution.len().to_string(),
                opt(r.max_stored),
                opt(r.memory_bound),
                r.passes.to_string(),
                opt(r.oracle_calls),
                opt(r.elapsed_ms),
                String::new(),
            ]),
            Err(e) => {
                rec.extend(std::iter::repeat_n(String::new(), COLUMNS.len() - rec.len() - 1));
                rec.push(e.clone());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
