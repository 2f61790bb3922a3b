//! Single-pass semi-streaming maximization over a matroid.
//!
//! Each arriving element with positive derivative `∂_u F(a)` is offered to a
//! window of geometric buckets `A_i` below its level `i(u) = ⌊log_c ∂_u F(a)⌋`,
//! adding fractional mass `c^i / (m ∂_u F(a))` for every bucket it enters.
//! Buckets far below the level where `rank(M)` elements have accumulated are
//! discarded, which keeps memory at `O(L · rank)`. At the end the surviving
//! buckets are dealt round-robin into `m` independent sets whose average is
//! rounded.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matroid::{validate_set, ElementId, Matroid};
use crate::multilinear::{FractionalPoint, Multilinear};
use crate::rounding::{round_best_of, ConvexCombination, RoundingConfig};
use crate::tolerance::TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Monotone,
    NonMonotone,
}

impl Mode {
    pub fn alpha(self) -> f64 {
        match self {
            Mode::Monotone => 1.1462,
            Mode::NonMonotone => 1.9532,
        }
    }

    /// The worst-case approximation ratio `1/(α+2)` (monotone) or `0.1921`
    /// (non-monotone), before subtracting `ε`.
    pub fn ratio(self) -> f64 {
        match self {
            Mode::Monotone => 1.0 / (self.alpha() + 2.0),
            Mode::NonMonotone => 0.1921,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monotone" => Ok(Mode::Monotone),
            "nonmonotone" | "non-monotone" | "non_monotone" => Ok(Mode::NonMonotone),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// Constants derived from `ε` and the mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinglePassConfig {
    pub epsilon: f64,
    pub mode: Mode,
    pub alpha: f64,
    /// Number of candidate sets.
    pub m: usize,
    /// Bucket ratio.
    pub c: f64,
    /// How many levels below the accumulation level are kept.
    pub l: i64,
    /// Cap on the mass one element may receive (non-monotone mode only).
    pub p: Option<f64>,
}

impl SinglePassConfig {
    pub fn new(epsilon: f64, mode: Mode) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        let alpha = mode.alpha();
        let m = (3.0 * alpha / epsilon).ceil() as usize;
        let mf = m as f64;
        let c = mf / (mf - alpha);
        let l = ((2.0 * c / (epsilon * (c - 1.0))).ln() / c.ln()).ceil() as i64;
        let p = match mode {
            Mode::Monotone => None,
            Mode::NonMonotone => Some(1.0 / (mf * (c - 1.0) + 1.0)),
        };
        Ok(SinglePassConfig { epsilon, mode, alpha, m, c, l: l.max(1), p })
    }

    /// Largest number of elements the state may hold at any moment, including
    /// the additions of the element being processed.
    pub fn memory_bound(&self, rank: usize) -> usize {
        (self.l as usize + 3) * rank + self.l as usize
    }

    /// `⌊log_c d⌋` for `d > 0`, corrected against float error in the log.
    pub fn level(&self, d: f64) -> i64 {
        let mut i = (d.ln() / self.c.ln()).floor() as i64;
        while self.power(i) > d {
            i -= 1;
        }
        while self.power(i + 1) <= d {
            i += 1;
        }
        i
    }

    pub fn power(&self, i: i64) -> f64 {
        self.c.powi(i as i32)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Bucket {
    elements: Vec<ElementId>,
    /// `a_i(u)` for the element at the same position.
    mass: Vec<f64>,
}

/// Resource usage of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct PassStats {
    pub elements_seen: usize,
    /// Elements whose derivative passed the positivity guard.
    pub elements_admitted: usize,
    /// Peak number of stored bucket entries.
    pub max_stored: usize,
    pub memory_bound: usize,
}

/// Streaming state: buckets `A_i` with their mass vectors `a_i`, the
/// accumulated point `a = Σ_{i≥b} a_i` and the pruning index `b`.
pub struct SinglePass<'a, M: ?Sized> {
    cfg: SinglePassConfig,
    matroid: &'a M,
    oracle: Multilinear<'a>,
    rank: usize,
    buckets: BTreeMap<i64, Bucket>,
    a: FractionalPoint,
    b: Option<i64>,
    processed: Vec<bool>,
    scale: f64,
    stats: PassStats,
}

/// Result of [`SinglePass::finalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePassOutput {
    /// `S_0..S_{m-1}`.
    pub candidates: Vec<Vec<ElementId>>,
    /// `s = (1/m) Σ 1_{S_k}`.
    pub point: FractionalPoint,
    pub solution: Vec<ElementId>,
    pub value: f64,
    pub stats: PassStats,
}

impl<'a, M: Matroid + ?Sized> SinglePass<'a, M> {
    pub fn new(cfg: SinglePassConfig, matroid: &'a M, oracle: Multilinear<'a>) -> Result<Self> {
        let n = matroid.ground_size();
        if oracle.ground_size() != n {
            return Err(Error::Input(format!(
                "objective has ground size {}, matroid has {n}",
                oracle.ground_size()
            )));
        }
        if cfg.mode == Mode::Monotone && !oracle.objective().is_monotone() {
            return Err(Error::Config("monotone mode needs a monotone objective".into()));
        }
        let rank = matroid.rank_total();
        Ok(SinglePass {
            cfg,
            matroid,
            oracle,
            rank,
            buckets: BTreeMap::new(),
            a: FractionalPoint::zero(n),
            b: None,
            processed: vec![false; n],
            scale: 0.0,
            stats: PassStats { memory_bound: cfg.memory_bound(rank), ..PassStats::default() },
        })
    }

    pub fn config(&self) -> &SinglePassConfig {
        &self.cfg
    }

    /// The pruning index `b`; `None` stands for `-∞`.
    pub fn lower_index(&self) -> Option<i64> {
        self.b
    }

    pub fn accumulated(&self) -> &FractionalPoint {
        &self.a
    }

    /// Live buckets in increasing index order as `(i, A_i, a_i)`, where
    /// `a_i[k]` is the mass of `A_i[k]`.
    pub fn buckets(&self) -> impl Iterator<Item = (i64, &[ElementId], &[f64])> {
        self.buckets.iter().map(|(&i, bk)| (i, bk.elements.as_slice(), bk.mass.as_slice()))
    }

    pub fn stored(&self) -> usize {
        self.buckets.values().map(|bk| bk.elements.len()).sum()
    }

    pub fn stats(&self) -> PassStats {
        self.stats
    }

    fn positivity_margin(&self) -> f64 {
        if self.oracle.is_exact() {
            0.0
        } else {
            1e-12 * self.scale
        }
    }

    pub fn process(&mut self, u: ElementId) -> Result<()> {
        validate_set(self.processed.len(), &[u])?;
        if self.processed[u] {
            return Err(Error::Input(format!("element {u} arrived twice")));
        }
        self.processed[u] = true;
        self.stats.elements_seen += 1;
        if !self.oracle.is_exact() {
            self.scale = self.scale.max(self.oracle.objective().eval(&[u]));
        }
        let d = self.oracle.partial(&self.a, u)?;
        // Negated so that a NaN estimate is rejected too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(d > self.positivity_margin()) {
            return Ok(());
        }
        self.stats.elements_admitted += 1;

        let top = self.cfg.level(d);
        let window = top - self.rank as i64 - self.cfg.l;
        let start = self.b.map_or(window, |b| b.max(window));
        let scale = self.cfg.m as f64 * d;
        let mut given = 0.0;
        for i in start..=top {
            if let Some(p) = self.cfg.p {
                if given > p {
                    break;
                }
            }
            let bucket = self.buckets.entry(i).or_default();
            bucket.elements.push(u);
            if !self.matroid.independent(&bucket.elements) {
                bucket.elements.pop();
                if bucket.elements.is_empty() {
                    self.buckets.remove(&i);
                }
                continue;
            }
            let mass = self.cfg.power(i) / scale;
            bucket.mass.push(mass);
            given += mass;
        }

        let stored = self.stored();
        self.stats.max_stored = self.stats.max_stored.max(stored);
        if stored > self.stats.memory_bound {
            return Err(Error::Internal(format!(
                "{stored} stored elements exceed the bound {}",
                self.stats.memory_bound
            )));
        }

        self.prune()?;
        Ok(())
    }

    fn prune(&mut self) -> Result<()> {
        let mut total = 0;
        let mut h = None;
        for (&i, bk) in self.buckets.iter().rev() {
            total += bk.elements.len();
            if total >= self.rank && self.rank > 0 {
                h = Some(i);
                break;
            }
        }
        if let Some(h) = h {
            let b = h - self.cfg.l;
            if self.b.is_some_and(|old| b < old) {
                return Err(Error::Internal(format!("pruning index decreased to {b}")));
            }
            self.b = Some(b);
            self.buckets = self.buckets.split_off(&b);
        }
        let mut a = FractionalPoint::zero(self.processed.len());
        for bk in self.buckets.values() {
            for (&e, &mass) in bk.elements.iter().zip(&bk.mass) {
                let v = a.get(e) + mass;
                if v > 1.0 + TOL {
                    return Err(Error::Internal(format!("coordinate {e} of a reached {v}")));
                }
                a.set(e, v.min(1.0))?;
            }
        }
        self.a = a;
        Ok(())
    }

    /// Checks that every live bucket `A_i` with `b < i` is spanned by
    /// `A_{i-1}`; returns a description of the first offending element.
    pub fn check_nested_spanning(&self) -> Option<String> {
        let b = self.buckets.keys().next().copied()?;
        let b = self.b.map_or(b, |lb| lb.max(b));
        let empty = Bucket::default();
        for (&i, bk) in self.buckets.range(b + 1..) {
            let below = self.buckets.get(&(i - 1)).unwrap_or(&empty);
            for &u in &bk.elements {
                if below.elements.contains(&u) {
                    continue;
                }
                let mut probe = below.elements.clone();
                probe.push(u);
                if self.matroid.independent(&probe) {
                    return Some(format!("element {u} of A_{i} is not spanned by A_{}", i - 1));
                }
            }
        }
        None
    }

    /// Builds `S_0..S_{m-1}` from the live buckets (highest index first,
    /// bucket `i` feeding `S_{i mod m}`) and rounds their average.
    pub fn finalize(self, rounding: &RoundingConfig) -> Result<SinglePassOutput> {
        let m = self.cfg.m;
        let n = self.processed.len();
        let mut candidates: Vec<Vec<ElementId>> = vec![Vec::new(); m];
        for (&i, bk) in self.buckets.iter().rev() {
            let k = i.rem_euclid(m as i64) as usize;
            let target = &mut candidates[k];
            for &u in &bk.elements {
                if target.contains(&u) {
                    continue;
                }
                target.push(u);
                if !self.matroid.independent(target) {
                    target.pop();
                }
            }
        }
        let f = self.oracle.objective();
        let comb = ConvexCombination::uniform(n, candidates.clone(), m)?;
        let point = comb.point()?;
        let (solution, value) = if self.stats.elements_admitted == 0 {
            (Vec::new(), f.eval(&[]))
        } else {
            round_best_of(self.matroid, &comb, f, rounding)?
        };
        Ok(SinglePassOutput { candidates, point, solution, value, stats: self.stats })
    }
}

/// Runs the algorithm over `stream` and finalizes.
pub fn run_single_pass<M: Matroid + ?Sized>(
    cfg: SinglePassConfig,
    matroid: &M,
    oracle: Multilinear<'_>,
    stream: &[ElementId],
    rounding: &RoundingConfig,
) -> Result<SinglePassOutput> {
    let mut state = SinglePass::new(cfg, matroid, oracle)?;
    for &u in stream {
        state.process(u)?;
    }
    state.finalize(rounding)
}
