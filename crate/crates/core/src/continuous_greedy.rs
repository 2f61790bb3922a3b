//! Continuous greedy over the matroid polytope.
//!
//! [`dscg`] moves a fractional point in `T = ⌊1/ε⌋` steps of size `ε`. Each
//! direction is a base found by multi-pass local search on the surrogate
//! `g(S) = F(x + ε 1_S)`, which keeps every round a streaming computation.
//! [`discretized_continuous_greedy`] is the offline variant with step `1/h`
//! and exact argmax, used by the two-player protocol.

use crate::error::{Error, Result};
use crate::local_search::{multi_pass_local_search, validate_permutation, MultiPassOutput};
use crate::matroid::{validate_set, ElementId, Matroid};
use crate::multilinear::{FractionalPoint, Multilinear, ENUMERATION_CAP};
use crate::objective::SubmodularFn;
use crate::rounding::{round_best_of, ConvexCombination, RoundingConfig};
use crate::tolerance::TOL;

/// `g(S) = F(x + ε 1_S)` for a fixed base point `x`.
pub struct Surrogate<'a> {
    oracle: Multilinear<'a>,
    base: FractionalPoint,
    step: f64,
}

impl<'a> Surrogate<'a> {
    /// Requires every coordinate of `base` to be at most `1 - step`.
    pub fn new(oracle: Multilinear<'a>, base: FractionalPoint, step: f64) -> Result<Self> {
        if base.ground_size() != oracle.ground_size() {
            return Err(Error::Input("point and objective ground sizes differ".into()));
        }
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::Config(format!("step must lie in (0, 1], got {step}")));
        }
        if base.max_coordinate() > 1.0 - step + TOL {
            return Err(Error::Input(format!(
                "coordinate {} leaves no room for a step of {step}",
                base.max_coordinate()
            )));
        }
        if matches!(oracle, Multilinear::Enumerated(_)) && oracle.ground_size() > ENUMERATION_CAP {
            return Err(Error::Scale {
                what: "enumerated surrogate ground set",
                size: oracle.ground_size(),
                cap: ENUMERATION_CAP,
            });
        }
        Ok(Surrogate { oracle, base, step })
    }

    fn shifted(&self, set: &[ElementId]) -> Result<FractionalPoint> {
        let mut x = self.base.clone();
        x.add_scaled(set, self.step)?;
        Ok(x)
    }
}

impl SubmodularFn for Surrogate<'_> {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn is_monotone(&self) -> bool {
        self.oracle.objective().is_monotone()
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        // The constructor rules out every error the oracle could raise for a
        // valid set.
        self.shifted(set)
            .and_then(|x| self.oracle.value(&x))
            .expect("surrogate point stays inside [0,1]^N")
    }
}

/// Derived settings of [`dscg`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DscgConfig {
    pub epsilon: f64,
    /// Local-search parameter `3ε/25`.
    pub delta: f64,
    /// Number of rounds `⌊1/ε⌋`.
    pub rounds: usize,
}

impl DscgConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        let limit = 1.0 - (-1.0f64).exp();
        if !(epsilon > 0.0 && epsilon < limit) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1 - 1/e), got {epsilon}")));
        }
        Ok(DscgConfig { epsilon, delta: 3.0 * epsilon / 25.0, rounds: (1.0 / epsilon + 1e-9).floor() as usize })
    }
}

/// One local-search procedure call: from `x` (of total weight
/// `used_weight ≤ 1 - ε`) to `x' = x + ε 1_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct AcgStep {
    pub direction: Vec<ElementId>,
    pub search: MultiPassOutput,
}

pub fn acg_procedure<M: Matroid + ?Sized>(
    m: &M,
    oracle: Multilinear<'_>,
    x: &FractionalPoint,
    used_weight: f64,
    epsilon: f64,
    stream: &[ElementId],
) -> Result<AcgStep> {
    if used_weight > 1.0 - epsilon + TOL {
        return Err(Error::Input(format!(
            "point has weight {used_weight}, above 1 - ε = {}",
            1.0 - epsilon
        )));
    }
    let g = Surrogate::new(oracle, x.clone(), epsilon)?;
    let search = multi_pass_local_search(m, &g, stream, 3.0 * epsilon / 25.0)?;
    Ok(AcgStep { direction: search.base.clone(), search })
}

/// One round of [`dscg`], with `F` before and after the step.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DscgRound {
    pub direction: Vec<ElementId>,
    pub before: f64,
    pub after: f64,
    pub passes: usize,
    /// The local search that chose `direction`, run on the surrogate of
    /// the point before this round.
    pub search: MultiPassOutput,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DscgOutput {
    pub solution: Vec<ElementId>,
    pub value: f64,
    pub point: FractionalPoint,
    pub rounds: Vec<DscgRound>,
    pub total_passes: usize,
}

/// Streaming continuous greedy for monotone objectives.
pub fn dscg<M: Matroid + ?Sized>(
    cfg: &DscgConfig,
    m: &M,
    oracle: Multilinear<'_>,
    stream: &[ElementId],
    rounding: &RoundingConfig,
) -> Result<DscgOutput> {
    let f = oracle.objective();
    if !f.is_monotone() {
        return Err(Error::Config("continuous greedy needs a monotone objective".into()));
    }
    if f.ground_size() != m.ground_size() {
        return Err(Error::Input("objective and matroid ground sizes differ".into()));
    }
    validate_permutation(m.ground_size(), stream)?;
    let mut x = FractionalPoint::zero(m.ground_size());
    let mut entries = Vec::with_capacity(cfg.rounds);
    let mut rounds = Vec::with_capacity(cfg.rounds);
    let mut total_passes = 0;
    for t in 0..cfg.rounds {
        let before = oracle.value(&x)?;
        let step = acg_procedure(m, oracle, &x, t as f64 * cfg.epsilon, cfg.epsilon, stream)?;
        if !m.is_base(&step.direction)? {
            return Err(Error::Internal("local search returned a non-base".into()));
        }
        x.add_scaled(&step.direction, cfg.epsilon)?;
        let after = oracle.value(&x)?;
        total_passes += step.search.pass_count;
        let passes = step.search.pass_count;
        rounds.push(DscgRound { direction: step.direction.clone(), before, after, passes, search: step.search });
        if !step.direction.is_empty() {
            entries.push((step.direction, cfg.epsilon));
        }
    }
    let comb = ConvexCombination::new(m.ground_size(), entries)?;
    let (solution, value) = round_best_of(m, &comb, f, rounding)?;
    Ok(DscgOutput { solution, value, point: x, rounds, total_passes })
}

/// Output of [`discretized_continuous_greedy`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteGreedy {
    /// `C_1..C_h`.
    pub sets: Vec<Vec<ElementId>>,
    /// `x = (1/h) Σ 1_{C_i}`.
    pub point: FractionalPoint,
    /// `F(x^0), .., F(x^h)` along the way.
    pub values: Vec<f64>,
}

/// Offline continuous greedy restricted to `pool`, in `h` steps of size
/// `1/h`. Each step grows `C` one element at a time by exact argmax of
/// `F(x + (1/h) 1_{C+e})` (lowest id on ties) until `C` spans `pool`.
pub fn discretized_continuous_greedy<M: Matroid + ?Sized>(
    m: &M,
    oracle: Multilinear<'_>,
    pool: &[ElementId],
    h: usize,
) -> Result<DiscreteGreedy> {
    let n = m.ground_size();
    if oracle.ground_size() != n {
        return Err(Error::Input("objective and matroid ground sizes differ".into()));
    }
    if h == 0 {
        return Err(Error::Config("h must be positive".into()));
    }
    validate_set(n, pool)?;
    let mut candidates = pool.to_vec();
    candidates.sort_unstable();
    let target = m.rank(&candidates)?;
    let step = 1.0 / h as f64;
    let mut x = FractionalPoint::zero(n);
    let mut sets = Vec::with_capacity(h);
    let mut values = vec![oracle.value(&x)?];
    for _ in 0..h {
        let mut c: Vec<ElementId> = Vec::with_capacity(target);
        while c.len() < target {
            let mut best: Option<(ElementId, f64)> = None;
            for &e in &candidates {
                if c.contains(&e) {
                    continue;
                }
                c.push(e);
                if m.independent(&c) {
                    let mut probe = x.clone();
                    probe.add_scaled(&c, step)?;
                    let v = oracle.value(&probe)?;
                    if best.is_none_or(|(_, bv)| v > bv) {
                        best = Some((e, v));
                    }
                }
                c.pop();
            }
            let (e, _) = best.ok_or_else(|| Error::Internal("greedy step found no augmenting element".into()))?;
            c.push(e);
        }
        x.add_scaled(&c, step)?;
        values.push(oracle.value(&x)?);
        sets.push(c);
    }
    Ok(DiscreteGreedy { sets, point: x, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{visit_independent_subsets, PartitionMatroid, UniformMatroid};
    use crate::multilinear::coverage_f;
    use crate::objective::CoverageFunction;
    use crate::rng::CounterRng;
    use rand::Rng;

    fn brute_opt<M: Matroid, F: SubmodularFn>(m: &M, f: &F) -> f64 {
        let pool: Vec<ElementId> = (0..m.ground_size()).collect();
        let mut best = f.eval(&[]);
        visit_independent_subsets(m, &pool, &mut |s| best = best.max(f.eval(s)));
        best
    }

    fn random_coverage(rng: &mut CounterRng, n: usize) -> CoverageFunction {
        let universe = rng.random_range(3..12);
        let sets = (0..n)
            .map(|_| (0..universe).filter(|_| rng.random_bool(0.3)).collect())
            .collect();
        let weights = (0..universe).map(|_| rng.random_range(0.1..3.0)).collect();
        CoverageFunction::new(sets, weights).unwrap()
    }

    #[test]
    fn config_derivation() {
        let cfg = DscgConfig::new(0.2).unwrap();
        assert_eq!(cfg.rounds, 5);
        assert!((cfg.delta - 0.024).abs() < 1e-15);
        assert_eq!(DscgConfig::new(0.5).unwrap().rounds, 2);
        assert!(DscgConfig::new(0.7).is_err());
        assert!(DscgConfig::new(0.0).is_err());
    }

    #[test]
    fn surrogate_rejects_points_without_room() {
        let f = CoverageFunction::modular(vec![1.0, 1.0]).unwrap();
        let x = FractionalPoint::from_pairs(2, [(0, 0.9)]).unwrap();
        assert!(Surrogate::new(Multilinear::Coverage(&f), x.clone(), 0.2).is_err());
        let g = Surrogate::new(Multilinear::Coverage(&f), x, 0.1).unwrap();
        assert!((g.eval(&[0, 1]) - 1.1).abs() < 1e-12);
    }

    #[test]
    fn procedure_rejects_heavy_points() {
        let m = UniformMatroid::new(2, 1).unwrap();
        let f = CoverageFunction::modular(vec![1.0, 2.0]).unwrap();
        let x = FractionalPoint::from_pairs(2, [(0, 0.5)]).unwrap();
        assert!(acg_procedure(&m, Multilinear::Coverage(&f), &x, 0.9, 0.2, &[0, 1]).is_err());
    }

    #[test]
    fn two_element_instance_reaches_opt() {
        let m = UniformMatroid::new(2, 1).unwrap();
        let f = CoverageFunction::modular(vec![1.0, 2.0]).unwrap();
        let cfg = DscgConfig::new(0.5).unwrap();
        let out = dscg(&cfg, &m, Multilinear::Coverage(&f), &[0, 1], &RoundingConfig::default()).unwrap();
        assert_eq!(out.rounds.len(), 2);
        assert_eq!(out.solution, vec![1]);
        assert_eq!(out.value, 2.0);
    }

    #[test]
    fn zero_objective() {
        let m = UniformMatroid::new(3, 2).unwrap();
        let f = CoverageFunction::modular(vec![0.0; 3]).unwrap();
        let cfg = DscgConfig::new(0.3).unwrap();
        let out = dscg(&cfg, &m, Multilinear::Coverage(&f), &[2, 1, 0], &RoundingConfig::default()).unwrap();
        assert_eq!(out.value, 0.0);
        assert!(m.independent(&out.solution));
    }

    #[test]
    fn rounds_satisfy_step_guarantee() {
        let mut rng = CounterRng::new(6);
        for _ in 0..15 {
            let n = rng.random_range(4..10);
            let blocks: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let m = PartitionMatroid::new(blocks, vec![1, 2, 1]).unwrap();
            let f = random_coverage(&mut rng, n);
            let opt = brute_opt(&m, &f);
            let eps = 0.25;
            let cfg = DscgConfig::new(eps).unwrap();
            let stream: Vec<ElementId> = (0..n).collect();
            let out = dscg(&cfg, &m, Multilinear::Coverage(&f), &stream, &RoundingConfig::default()).unwrap();
            for r in &out.rounds {
                assert!(r.after - r.before >= eps * ((1.0 - 3.0 * eps) * opt - r.after) - 1e-9);
                assert!(m.is_base(&r.direction).unwrap());
                assert!(out.point.max_coordinate() <= (out.rounds.len() as f64) * eps + 1e-12);
            }
            assert!(m.independent(&out.solution));
            assert!(out.value <= opt + 1e-9);
        }
    }

    #[test]
    fn discretized_greedy_top_k_for_modular() {
        let m = UniformMatroid::new(5, 2).unwrap();
        let f = CoverageFunction::modular(vec![1.0, 5.0, 3.0, 4.0, 2.0]).unwrap();
        let out = discretized_continuous_greedy(&m, Multilinear::Coverage(&f), &[0, 1, 2, 3, 4], 1).unwrap();
        let mut c = out.sets[0].clone();
        c.sort_unstable();
        assert_eq!(c, vec![1, 3]);
        let empty = discretized_continuous_greedy(&m, Multilinear::Coverage(&f), &[], 3).unwrap();
        assert!(empty.sets.iter().all(|s| s.is_empty()));
    }

    #[test]
    fn discretized_greedy_matches_exhaustive_scoring() {
        let mut rng = CounterRng::new(8);
        let f = random_coverage(&mut rng, 5);
        let m = UniformMatroid::new(5, 2).unwrap();
        let h = 3;
        let out = discretized_continuous_greedy(&m, Multilinear::Coverage(&f), &[0, 1, 2, 3, 4], h).unwrap();
        // Replay every step, scoring all candidates independently.
        let mut x = vec![0.0; 5];
        for c in &out.sets {
            let mut built: Vec<ElementId> = Vec::new();
            for &chosen in c {
                let scores: Vec<(ElementId, f64)> = (0..5)
                    .filter(|e| !built.contains(e))
                    .map(|e| {
                        let mut y = x.clone();
                        for &b in built.iter().chain([e].iter()) {
                            y[b] += 1.0 / h as f64;
                        }
                        let p = FractionalPoint::from_pairs(5, y.into_iter().enumerate()).unwrap();
                        (e, coverage_f(&f, &p).unwrap())
                    })
                    .collect();
                let top = scores.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
                let first = scores.iter().find(|s| s.1 == top).unwrap().0;
                assert_eq!(chosen, first);
                built.push(chosen);
            }
            for &e in c {
                x[e] += 1.0 / h as f64;
            }
        }
        for w in out.values.windows(3) {
            assert!(w[2] - w[1] <= w[1] - w[0] + 1e-9);
        }
    }
}
