//! Submodular value oracles.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::matroid::{validate_set, ElementId};

/// Value oracle for a non-negative submodular set function over
/// `0..ground_size()`.
pub trait SubmodularFn: Send + Sync {
    fn ground_size(&self) -> usize;

    /// Whether the function is declared monotone. Algorithms that need
    /// monotonicity refuse functions that do not declare it.
    fn is_monotone(&self) -> bool;

    /// Raw evaluation on a duplicate-free, in-range set.
    fn eval(&self, set: &[ElementId]) -> f64;

    fn value(&self, set: &[ElementId]) -> Result<f64> {
        validate_set(self.ground_size(), set)?;
        Ok(self.eval(set))
    }

    /// `f(u | S) = f(S + u) - f(S)`; zero when `u ∈ S`.
    fn marginal(&self, u: ElementId, set: &[ElementId]) -> Result<f64> {
        validate_set(self.ground_size(), set)?;
        validate_set(self.ground_size(), &[u])?;
        Ok(self.marginal_unchecked(u, set))
    }

    fn marginal_unchecked(&self, u: ElementId, set: &[ElementId]) -> f64 {
        if set.contains(&u) {
            return 0.0;
        }
        let mut bigger = Vec::with_capacity(set.len() + 1);
        bigger.extend_from_slice(set);
        bigger.push(u);
        self.eval(&bigger) - self.eval(set)
    }

    /// `f(u : T)`: the marginal of `u` with respect to the elements of `T`
    /// that arrived strictly before `u`.
    fn ordered_marginal(&self, u: ElementId, set: &[ElementId], order: &ArrivalOrder) -> Result<f64> {
        validate_set(self.ground_size(), set)?;
        validate_set(self.ground_size(), &[u])?;
        let pos = order.require(u)?;
        let mut earlier = Vec::with_capacity(set.len());
        for &v in set {
            if order.require(v)? < pos {
                earlier.push(v);
            }
        }
        Ok(self.marginal_unchecked(u, &earlier))
    }
}

impl<T: SubmodularFn + ?Sized> SubmodularFn for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn is_monotone(&self) -> bool {
        (**self).is_monotone()
    }
    fn eval(&self, set: &[ElementId]) -> f64 {
        (**self).eval(set)
    }
}

/// Arrival indices of elements in a stream. Elements of a starting solution
/// take the pseudo-indices `1 - |S0| ..= 0`, stream elements `1 ..= n`.
#[derive(Debug, Clone)]
pub struct ArrivalOrder {
    index: Vec<Option<i64>>,
}

impl ArrivalOrder {
    pub fn new(ground: usize) -> Self {
        ArrivalOrder { index: vec![None; ground] }
    }

    /// Order in which `sequence[k]` gets index `first + k`.
    pub fn from_sequence(ground: usize, sequence: &[ElementId], first: i64) -> Result<Self> {
        let mut order = ArrivalOrder::new(ground);
        for (k, &e) in sequence.iter().enumerate() {
            order.assign(e, first + k as i64)?;
        }
        Ok(order)
    }

    pub fn assign(&mut self, e: ElementId, position: i64) -> Result<()> {
        let ground = self.index.len();
        let slot = self.index.get_mut(e).ok_or(Error::OutOfRange { id: e, ground })?;
        if slot.is_some() {
            return Err(Error::Input(format!("element {e} has two arrival indices")));
        }
        *slot = Some(position);
        Ok(())
    }

    pub fn get(&self, e: ElementId) -> Option<i64> {
        self.index.get(e).copied().flatten()
    }

    fn require(&self, e: ElementId) -> Result<i64> {
        self.get(e)
            .ok_or_else(|| Error::Input(format!("element {e} has no arrival index")))
    }
}

/// Weighted coverage: element `e` covers the universe points `sets[e]`, and
/// `f(S)` is the total weight of the points covered by `S`. Monotone.
#[derive(Debug, Clone)]
pub struct CoverageFunction {
    sets: Vec<Vec<usize>>,
    weights: Vec<f64>,
    covered_by: Vec<Vec<ElementId>>,
}

impl CoverageFunction {
    pub fn new(sets: Vec<Vec<usize>>, weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Input(format!("coverage weight {w} is not a non-negative real")));
        }
        let mut covered_by = vec![Vec::new(); weights.len()];
        let mut clean = Vec::with_capacity(sets.len());
        for (e, mut points) in sets.into_iter().enumerate() {
            points.sort_unstable();
            points.dedup();
            for &p in &points {
                let slot = covered_by.get_mut(p).ok_or_else(|| {
                    Error::Input(format!(
                        "element {e} covers point {p}, but the universe has {} points",
                        weights.len()
                    ))
                })?;
                slot.push(e);
            }
            clean.push(points);
        }
        Ok(CoverageFunction { sets: clean, weights, covered_by })
    }

    /// A modular function `f(S) = Σ_{e∈S} weights[e]`, as coverage with one
    /// private point per element.
    pub fn modular(weights: Vec<f64>) -> Result<Self> {
        let sets = (0..weights.len()).map(|e| vec![e]).collect();
        CoverageFunction::new(sets, weights)
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Elements covering universe point `p`.
    pub fn covered_by(&self, p: usize) -> &[ElementId] {
        &self.covered_by[p]
    }

    pub fn universe_size(&self) -> usize {
        self.weights.len()
    }
}

impl SubmodularFn for CoverageFunction {
    fn ground_size(&self) -> usize {
        self.sets.len()
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        let mut bitmap = vec![0u64; self.weights.len().div_ceil(64)];
        for &e in set {
            for &p in &self.sets[e] {
                bitmap[p / 64] |= 1 << (p % 64);
            }
        }
        // Sum in point order so equal covers give bit-identical values.
        let mut total = 0.0;
        for (word_idx, &word) in bitmap.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                total += self.weights[word_idx * 64 + bit];
                w &= w - 1;
            }
        }
        total
    }
}

/// Weighted cut function of an undirected graph whose vertices are the ground
/// elements: `f(S)` is the weight of edges with exactly one endpoint in `S`.
/// Non-negative, submodular, not monotone.
#[derive(Debug, Clone)]
pub struct CutFunction {
    vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl CutFunction {
    pub fn new(vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(a, b, w) in &edges {
            if a >= vertices || b >= vertices {
                return Err(Error::Input(format!("cut edge ({a}, {b}) leaves 0..{vertices}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Input(format!("cut edge weight {w} is not a non-negative real")));
            }
        }
        Ok(CutFunction { vertices, edges })
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }
}

impl SubmodularFn for CutFunction {
    fn ground_size(&self) -> usize {
        self.vertices
    }

    fn is_monotone(&self) -> bool {
        false
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        let mut inside = vec![false; self.vertices];
        for &v in set {
            inside[v] = true;
        }
        self.edges
            .iter()
            .filter(|(a, b, _)| inside[*a] != inside[*b])
            .map(|e| e.2)
            .sum()
    }
}

/// Wraps an oracle and counts raw evaluations. The counter is advisory: it is
/// updated with relaxed atomics and only read for reporting.
pub struct CountingOracle<F> {
    inner: F,
    calls: AtomicU64,
}

impl<F: SubmodularFn> CountingOracle<F> {
    pub fn new(inner: F) -> Self {
        CountingOracle { inner, calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: SubmodularFn> SubmodularFn for CountingOracle<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn is_monotone(&self) -> bool {
        self.inner.is_monotone()
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.eval(set)
    }
}

/// Exhaustively checks non-negativity, submodularity
/// (`f(u|S) ≥ f(u|T)` for all `S ⊆ T`, `u ∉ T`) and, when declared,
/// monotonicity. `tol` is an absolute slack. Ground sets up to 12 elements.
pub fn find_submodularity_violation<F: SubmodularFn + ?Sized>(f: &F, tol: f64) -> Option<String> {
    let n = f.ground_size();
    assert!(n <= 12, "exhaustive submodularity check is limited to 12 elements");
    let values: Vec<f64> = (0u32..1 << n)
        .map(|mask| {
            let set: Vec<ElementId> = (0..n).filter(|&e| mask >> e & 1 == 1).collect();
            f.eval(&set)
        })
        .collect();
    let full = (1usize << n) - 1;
    for t in 0usize..=full {
        if values[t] < -tol {
            return Some(format!("f is negative on mask {t:#b}"));
        }
        for u in (0..n).filter(|&u| t >> u & 1 == 0) {
            let gain_t = values[t | 1 << u] - values[t];
            if f.is_monotone() && gain_t < -tol {
                return Some(format!("declared monotone but f({u} | {t:#b}) = {gain_t}"));
            }
            // Every subset S of T.
            let mut s = t;
            loop {
                let gain_s = values[s | 1 << u] - values[s];
                if gain_s < gain_t - tol {
                    return Some(format!(
                        "f({u} | {s:#b}) = {gain_s} < f({u} | {t:#b}) = {gain_t}"
                    ));
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & t;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;
    use proptest::prelude::*;
    use rand::Rng;

    fn two_sets() -> CoverageFunction {
        // U_a = {1, 2}, U_b = {2, 3} with unit weights (point 0 unused).
        CoverageFunction::new(vec![vec![1, 2], vec![2, 3]], vec![1.0; 4]).unwrap()
    }

    #[test]
    fn value_examples() {
        let cov = two_sets();
        assert_eq!(cov.value(&[0, 1]).unwrap(), 3.0);
        assert_eq!(cov.value(&[]).unwrap(), 0.0);
        let cut = CutFunction::new(2, vec![(0, 1, 5.0)]).unwrap();
        assert_eq!(cut.value(&[0]).unwrap(), 5.0);
        assert_eq!(cut.value(&[]).unwrap(), 0.0);
        assert!(matches!(cov.value(&[2]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn marginal_examples() {
        let cov = two_sets();
        assert_eq!(cov.marginal(1, &[0]).unwrap(), 1.0);
        assert_eq!(cov.marginal(0, &[0]).unwrap(), 0.0);
        let cut = CutFunction::new(2, vec![(0, 1, 5.0)]).unwrap();
        assert_eq!(cut.marginal(1, &[0]).unwrap(), -5.0);
    }

    #[test]
    fn ordered_marginal_examples() {
        let cov = two_sets();
        let order = ArrivalOrder::from_sequence(2, &[0, 1], 1).unwrap();
        assert_eq!(cov.ordered_marginal(1, &[], &order).unwrap(), cov.marginal(1, &[]).unwrap());
        assert_eq!(cov.ordered_marginal(0, &[0, 1], &order).unwrap(), 2.0);
        // f(b : {a, b}) = f(b | {a}) by direct evaluation.
        let direct = cov.value(&[0, 1]).unwrap() - cov.value(&[0]).unwrap();
        assert_eq!(cov.ordered_marginal(1, &[0, 1], &order).unwrap(), direct);
        assert_eq!(direct, 1.0);

        let mut partial = ArrivalOrder::new(2);
        partial.assign(1, 0).unwrap();
        assert!(matches!(cov.ordered_marginal(1, &[0], &partial), Err(Error::Input(_))));
        assert!(partial.assign(1, 3).is_err());
    }

    #[test]
    fn invalid_functions_rejected() {
        assert!(CoverageFunction::new(vec![vec![3]], vec![1.0]).is_err());
        assert!(CoverageFunction::new(vec![vec![0]], vec![-1.0]).is_err());
        assert!(CutFunction::new(2, vec![(0, 2, 1.0)]).is_err());
        assert!(CutFunction::new(2, vec![(0, 1, f64::NAN)]).is_err());
    }

    #[test]
    fn counting_oracle_counts_evaluations() {
        let counted = CountingOracle::new(two_sets());
        counted.value(&[0]).unwrap();
        counted.marginal(1, &[0]).unwrap();
        assert_eq!(counted.calls(), 3);
    }

    fn random_coverage(rng: &mut CounterRng, n: usize) -> CoverageFunction {
        let universe = rng.random_range(1..12);
        let sets = (0..n)
            .map(|_| (0..universe).filter(|_| rng.random_bool(0.3)).collect())
            .collect();
        let weights = (0..universe).map(|_| rng.random_range(0.0..3.0)).collect();
        CoverageFunction::new(sets, weights).unwrap()
    }

    fn random_cut(rng: &mut CounterRng, n: usize) -> CutFunction {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.random_bool(0.4) {
                    edges.push((a, b, rng.random_range(0.0..2.0)));
                }
            }
        }
        CutFunction::new(n, edges).unwrap()
    }

    #[test]
    fn concrete_functions_are_submodular() {
        let mut rng = CounterRng::new(3);
        for n in 1..=8 {
            assert_eq!(find_submodularity_violation(&random_coverage(&mut rng, n), 1e-9), None);
            assert_eq!(find_submodularity_violation(&random_cut(&mut rng, n), 1e-9), None);
        }
    }

    /// Supermodular: f(S) = |S|^2.
    struct Square(usize);

    impl SubmodularFn for Square {
        fn ground_size(&self) -> usize {
            self.0
        }
        fn is_monotone(&self) -> bool {
            true
        }
        fn eval(&self, set: &[ElementId]) -> f64 {
            (set.len() * set.len()) as f64
        }
    }

    #[test]
    fn checker_detects_supermodularity() {
        assert!(find_submodularity_violation(&Square(3), 1e-9).is_some());
    }

    #[test]
    fn cut_is_not_monotone() {
        let cut = CutFunction::new(2, vec![(0, 1, 1.0)]).unwrap();
        assert!(!cut.is_monotone());
        assert!(cut.value(&[0, 1]).unwrap() < cut.value(&[0]).unwrap());
    }

    proptest! {
        #[test]
        fn marginal_follows_value_path(seed in any::<u64>(), mask in 0u32..256, u in 0usize..8) {
            let mut rng = CounterRng::new(seed);
            let cov = random_coverage(&mut rng, 8);
            let set: Vec<usize> = (0..8).filter(|&e| mask >> e & 1 == 1 && e != u).collect();
            let mut bigger = set.clone();
            bigger.push(u);
            let m = cov.marginal(u, &set).unwrap();
            prop_assert_eq!(m, cov.value(&bigger).unwrap() - cov.value(&set).unwrap());
            // Evaluation is pure.
            prop_assert_eq!(cov.value(&set).unwrap().to_bits(), cov.value(&set).unwrap().to_bits());
        }

        #[test]
        fn coverage_value_is_order_independent(seed in any::<u64>(), mask in 0u32..256) {
            let mut rng = CounterRng::new(seed);
            let cov = random_coverage(&mut rng, 8);
            let set: Vec<usize> = (0..8).filter(|&e| mask >> e & 1 == 1).collect();
            let reversed: Vec<usize> = set.iter().rev().copied().collect();
            prop_assert_eq!(cov.eval(&set).to_bits(), cov.eval(&reversed).to_bits());
        }
    }
}
