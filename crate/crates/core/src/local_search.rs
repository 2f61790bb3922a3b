//! Swap-based local search over a stream.
//!
//! A pass starts from a base and, for every arriving element, swaps it with
//! the cheapest element of the circuit it closes when the gain is at least `c`
//! times the (arrival-ordered) loss. Repeating passes with `c = 1 + δ` until
//! the improvement stalls yields an approximate local optimum.

use crate::error::{Error, Result};
use crate::matroid::{validate_set, ElementId, Matroid};
use crate::objective::{ArrivalOrder, SubmodularFn};
use crate::tolerance;

/// One completed pass.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PassRecord {
    pub c: f64,
    pub start: Vec<ElementId>,
    pub end: Vec<ElementId>,
    pub start_value: f64,
    pub end_value: f64,
    pub swaps: usize,
}

/// Checks that `stream` lists distinct in-range elements.
pub fn validate_stream(ground: usize, stream: &[ElementId]) -> Result<()> {
    validate_set(ground, stream)
}

/// Checks that `stream` is a permutation of the ground set.
pub fn validate_permutation(ground: usize, stream: &[ElementId]) -> Result<()> {
    validate_set(ground, stream)?;
    if stream.len() != ground {
        return Err(Error::Input(format!(
            "stream has {} elements, ground set has {ground}",
            stream.len()
        )));
    }
    Ok(())
}

/// One pass starting from the base `s0`. Elements of `stream` that belong to
/// `s0` are skipped. The start elements precede the stream in the arrival
/// order, sorted by id.
pub fn local_search_pass<M, F>(m: &M, f: &F, s0: &[ElementId], stream: &[ElementId], c: f64) -> Result<PassRecord>
where
    M: Matroid + ?Sized,
    F: SubmodularFn + ?Sized,
{
    let n = m.ground_size();
    if f.ground_size() != n {
        return Err(Error::Input("objective and matroid ground sizes differ".into()));
    }
    if !(c > 1.0 && c.is_finite()) {
        return Err(Error::Config(format!("swap ratio must exceed 1, got {c}")));
    }
    validate_stream(n, stream)?;
    if !m.is_base(s0)? {
        return Err(Error::Config(format!("starting set {s0:?} is not a base")));
    }

    let mut order = ArrivalOrder::new(n);
    let mut start = s0.to_vec();
    start.sort_unstable();
    for (k, &e) in start.iter().enumerate() {
        order.assign(e, k as i64 + 1 - start.len() as i64)?;
    }
    let mut position = 0i64;
    let mut s = start.clone();
    let start_value = f.eval(&s);
    let mut value = start_value;
    let mut swaps = 0;
    for &u in stream {
        if start.contains(&u) {
            continue;
        }
        position += 1;
        order.assign(u, position)?;
        let circuit = m.circuit_of(&s, u)?;
        let mut out: Option<(ElementId, f64, i64)> = None;
        for &w in &circuit[..circuit.len() - 1] {
            let loss = f.ordered_marginal(w, &s, &order)?;
            let at = order.get(w).expect("solution elements have arrived");
            let better = match out {
                None => true,
                Some((_, best, best_at)) => loss < best || (loss == best && at < best_at),
            };
            if better {
                out = Some((w, loss, at));
            }
        }
        let (w, loss, _) = out.ok_or_else(|| Error::Internal(format!("circuit of {u} is a loop")))?;
        let gain = f.marginal_unchecked(u, &s);
        // A zero gain never justifies a swap, even when the loss is zero too.
        if gain > 0.0 && gain >= c * loss {
            let k = s.iter().position(|&e| e == w).expect("circuit element is in the solution");
            s[k] = u;
            swaps += 1;
            let next = f.eval(&s);
            if !tolerance::ge(next, value) {
                return Err(Error::Internal(format!("swap lowered the value from {value} to {next}")));
            }
            value = next;
            if cfg!(debug_assertions) && !m.is_base(&s)? {
                return Err(Error::Internal("swap broke the base".into()));
            }
        }
    }
    Ok(PassRecord { c, start, end: s, start_value, end_value: value, swaps })
}

/// Left side minus right side of the guarantee of one pass against a base
/// `b`:
/// `(c-1) f(S_n|∅) + ((3c-2)/(c-1)) [f(S_n) - f(S_0)] - [f(B | S_0\B) - f(S_0|∅)]`.
/// Non-negative for monotone submodular `f`.
pub fn pass_guarantee_gap<F: SubmodularFn + ?Sized>(f: &F, pass: &PassRecord, b: &[ElementId]) -> f64 {
    let c = pass.c;
    let empty = f.eval(&[]);
    let s0_minus_b: Vec<ElementId> = pass.start.iter().copied().filter(|e| !b.contains(e)).collect();
    let mut union = b.to_vec();
    union.extend(s0_minus_b.iter().copied());
    let b_given = f.eval(&union) - f.eval(&s0_minus_b);
    let lhs = (c - 1.0) * (pass.end_value - empty) + (3.0 * c - 2.0) / (c - 1.0) * (pass.end_value - pass.start_value);
    lhs - (b_given - (pass.start_value - empty))
}

/// Result of [`multi_pass_local_search`].
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MultiPassOutput {
    pub base: Vec<ElementId>,
    pub value: f64,
    /// The greedy base `T_0`.
    pub initial: Vec<ElementId>,
    /// Swap passes in order; the first uses `c = 2`.
    pub passes: Vec<PassRecord>,
    /// Passes over the stream, including the one building `T_0`.
    pub pass_count: usize,
    /// The stopping threshold `δ² f(T_1|∅)`.
    pub threshold: f64,
}

/// Number of `c = 1 + δ` passes allowed before giving up.
pub fn pass_budget(delta: f64) -> usize {
    1 + (4.0 / (delta * delta)).ceil() as usize
}

/// Greedy base in stream order.
pub fn greedy_base<M: Matroid + ?Sized>(m: &M, stream: &[ElementId]) -> Vec<ElementId> {
    let mut t = Vec::new();
    for &u in stream {
        t.push(u);
        if !m.independent(&t) {
            t.pop();
        }
    }
    t
}

/// Repeated local search passes over the replayable `stream` (a permutation
/// of the ground set) until a pass improves by at most `δ² f(T_1|∅)`.
pub fn multi_pass_local_search<M, F>(m: &M, f: &F, stream: &[ElementId], delta: f64) -> Result<MultiPassOutput>
where
    M: Matroid + ?Sized,
    F: SubmodularFn + ?Sized,
{
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Config(format!("delta must lie in (0, 1), got {delta}")));
    }
    validate_permutation(m.ground_size(), stream)?;
    let t0 = greedy_base(m, stream);
    if t0.len() != m.rank_total() {
        return Err(Error::Internal("greedy pass did not reach a base".into()));
    }
    let first = local_search_pass(m, f, &t0, stream, 2.0)?;
    let threshold = delta * delta * (first.end_value - f.eval(&[]));
    let mut passes = vec![first];
    for _ in 0..pass_budget(delta) {
        let prev = passes.last().expect("at least one pass");
        let next = local_search_pass(m, f, &prev.end, stream, 1.0 + delta)?;
        if !tolerance::ge(next.end_value, prev.end_value) {
            return Err(Error::Internal("local search pass lowered the value".into()));
        }
        let stalled = next.end_value - prev.end_value <= threshold;
        passes.push(next);
        if stalled {
            let done = &passes[passes.len() - 2];
            let (base, value) = (done.end.clone(), done.end_value);
            let pass_count = passes.len() + 1;
            return Ok(MultiPassOutput { base, value, initial: t0, passes, pass_count, threshold });
        }
    }
    Err(Error::Internal(format!(
        "no stall within {} passes; the objective is not monotone submodular or this is a bug",
        pass_budget(delta)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{visit_independent_subsets, PartitionMatroid, UniformMatroid};
    use crate::objective::CoverageFunction;
    use crate::rng::CounterRng;
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn brute_opt<M: Matroid, F: SubmodularFn>(m: &M, f: &F) -> (Vec<ElementId>, f64) {
        let pool: Vec<ElementId> = (0..m.ground_size()).collect();
        let mut best = (Vec::new(), f.eval(&[]));
        visit_independent_subsets(m, &pool, &mut |s| {
            let v = f.eval(s);
            if v > best.1 {
                best = (s.to_vec(), v);
            }
        });
        best
    }

    fn random_instance(rng: &mut CounterRng) -> (PartitionMatroid, CoverageFunction) {
        let n = rng.random_range(4..11);
        let parts = rng.random_range(1..4);
        let blocks: Vec<usize> = (0..n).map(|_| rng.random_range(0..parts)).collect();
        let caps: Vec<usize> = (0..parts).map(|_| rng.random_range(1..3)).collect();
        let universe = rng.random_range(3..12);
        let sets = (0..n)
            .map(|_| (0..universe).filter(|_| rng.random_bool(0.3)).collect())
            .collect();
        let weights = (0..universe).map(|_| rng.random_range(0.1..3.0)).collect();
        (PartitionMatroid::new(blocks, caps).unwrap(), CoverageFunction::new(sets, weights).unwrap())
    }

    #[test]
    fn single_swap_example() {
        let m = UniformMatroid::new(2, 1).unwrap();
        let f = CoverageFunction::modular(vec![1.0, 3.0]).unwrap();
        let pass = local_search_pass(&m, &f, &[0], &[1], 2.0).unwrap();
        assert_eq!(pass.end, vec![1]);
        assert_eq!(pass.swaps, 1);
        let pass = local_search_pass(&m, &f, &[0], &[1], 3.5).unwrap();
        assert_eq!(pass.end, vec![0]);
    }

    #[test]
    fn zero_objective_keeps_start() {
        let m = UniformMatroid::new(4, 2).unwrap();
        let f = CoverageFunction::modular(vec![0.0; 4]).unwrap();
        let pass = local_search_pass(&m, &f, &[2, 3], &[0, 1], 2.0).unwrap();
        assert_eq!(pass.end, vec![2, 3]);
        let out = multi_pass_local_search(&m, &f, &[0, 1, 2, 3], 0.5).unwrap();
        assert_eq!(out.base, out.initial);
        assert_eq!(out.passes.len(), 2);
        assert_eq!(out.pass_count, 3);
    }

    #[test]
    fn invalid_configuration_rejected() {
        let m = UniformMatroid::new(3, 2).unwrap();
        let f = CoverageFunction::modular(vec![1.0; 3]).unwrap();
        assert!(matches!(local_search_pass(&m, &f, &[0], &[1, 2], 2.0), Err(Error::Config(_))));
        assert!(matches!(local_search_pass(&m, &f, &[0, 1], &[2], 1.0), Err(Error::Config(_))));
        assert!(multi_pass_local_search(&m, &f, &[0, 1, 2], 0.0).is_err());
        assert!(multi_pass_local_search(&m, &f, &[0, 1], 0.5).is_err());
    }

    #[test]
    fn single_element_ground() {
        let m = UniformMatroid::new(1, 1).unwrap();
        let f = CoverageFunction::modular(vec![2.0]).unwrap();
        let out = multi_pass_local_search(&m, &f, &[0], 0.3).unwrap();
        assert_eq!(out.base, vec![0]);
    }

    #[test]
    fn pass_guarantee_and_multi_pass_bounds() {
        let mut rng = CounterRng::new(4);
        for _ in 0..60 {
            let (m, f) = random_instance(&mut rng);
            let n = m.ground_size();
            let (opt, opt_value) = brute_opt(&m, &f);
            let opt = m.extend_to_base(&opt).unwrap();
            let mut stream: Vec<ElementId> = (0..n).collect();
            stream.shuffle(&mut rng);
            let start = greedy_base(&m, &stream);
            for c in [2.0, 1.1] {
                let pass = local_search_pass(&m, &f, &start, &stream, c).unwrap();
                assert!(m.is_base(&pass.end).unwrap());
                assert!(pass_guarantee_gap(&f, &pass, &opt) >= -1e-9 * opt_value);
            }
            let delta = rng.random_range(0.1..0.9);
            let out = multi_pass_local_search(&m, &f, &stream, delta).unwrap();
            assert!(out.passes.len() <= 1 + pass_budget(delta));
            assert!(out.value >= opt_value / 5.0 - 1e-9);
            assert!(out.value <= opt_value + 1e-9);
            for pass in &out.passes {
                assert!(pass_guarantee_gap(&f, pass, &opt) >= -1e-9 * opt_value);
            }
            let t = &out.base;
            let t_minus_opt: Vec<ElementId> = t.iter().copied().filter(|e| !opt.contains(e)).collect();
            let mut union = opt.clone();
            union.extend(t_minus_opt.iter().copied());
            let gap = f.eval(&union) - f.eval(&t_minus_opt) - out.value;
            assert!(gap < 5.0 * delta * opt_value + 1e-9);
        }
    }
}
