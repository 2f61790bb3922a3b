//! Matroid oracles.
//!
//! A [`Matroid`] only has to answer independence queries on duplicate-free
//! sets of in-range ids; rank, span, circuits and the exchange operations are
//! derived from that single query, so they work unchanged for every concrete
//! matroid (and for the padded matroids used by swap rounding).

use crate::error::{Error, Result};

/// Index of an element of the ground set `0..ground_size`.
pub type ElementId = usize;

/// Checks that every id is in range and that no id repeats.
pub fn validate_set(ground: usize, set: &[ElementId]) -> Result<()> {
    let mut seen = vec![false; ground];
    for &id in set {
        if id >= ground {
            return Err(Error::OutOfRange { id, ground });
        }
        if std::mem::replace(&mut seen[id], true) {
            return Err(Error::Input(format!("element {id} appears twice in a set")));
        }
    }
    Ok(())
}

fn with(set: &[ElementId], u: ElementId) -> Vec<ElementId> {
    let mut v = Vec::with_capacity(set.len() + 1);
    v.extend_from_slice(set);
    v.push(u);
    v
}

fn without(set: &[ElementId], u: ElementId) -> Vec<ElementId> {
    set.iter().copied().filter(|&x| x != u).collect()
}

/// Independence oracle over the ground set `0..ground_size()`.
///
/// Implementations must describe a loopless matroid: `∅` and every singleton
/// are independent, independence is closed under subsets, and the exchange
/// axiom holds. Oracles are immutable and may be queried from many threads.
pub trait Matroid: Send + Sync {
    fn ground_size(&self) -> usize;

    /// Raw independence test. `set` is assumed duplicate-free and in range;
    /// use [`Matroid::is_independent`] for validated input.
    fn independent(&self, set: &[ElementId]) -> bool;

    /// Rank of the whole ground set.
    fn rank_total(&self) -> usize {
        let all: Vec<ElementId> = (0..self.ground_size()).collect();
        self.rank_unchecked(&all)
    }

    fn is_independent(&self, set: &[ElementId]) -> Result<bool> {
        validate_set(self.ground_size(), set)?;
        Ok(self.independent(set))
    }

    /// Greedy rank: insert elements one by one, keeping those that stay
    /// independent.
    fn rank_unchecked(&self, set: &[ElementId]) -> usize {
        let mut basis = Vec::with_capacity(set.len());
        for &u in set {
            basis.push(u);
            if !self.independent(&basis) {
                basis.pop();
            }
        }
        basis.len()
    }

    fn rank(&self, set: &[ElementId]) -> Result<usize> {
        validate_set(self.ground_size(), set)?;
        Ok(self.rank_unchecked(set))
    }

    /// Whether `u ∈ Span(set)`, i.e. `rank(set) == rank(set + u)`.
    fn spans(&self, set: &[ElementId], u: ElementId) -> Result<bool> {
        validate_set(self.ground_size(), set)?;
        validate_set(self.ground_size(), &[u])?;
        if set.contains(&u) {
            return Ok(true);
        }
        Ok(self.rank_unchecked(set) == self.rank_unchecked(&with(set, u)))
    }

    /// Extends `set` greedily (in id order) to a base containing it.
    fn extend_to_base(&self, set: &[ElementId]) -> Result<Vec<ElementId>> {
        validate_set(self.ground_size(), set)?;
        if !self.independent(set) {
            return Err(Error::Contract("cannot extend a dependent set to a base".into()));
        }
        let mut base = set.to_vec();
        for u in 0..self.ground_size() {
            if !base.contains(&u) {
                base.push(u);
                if !self.independent(&base) {
                    base.pop();
                }
            }
        }
        Ok(base)
    }

    fn is_base(&self, set: &[ElementId]) -> Result<bool> {
        Ok(self.is_independent(set)? && set.len() == self.rank_total())
    }

    /// The unique circuit of `set + u`, for independent `set` and dependent
    /// `set + u`.
    ///
    /// Computed by removal probing: `w` belongs to the circuit iff
    /// `(set + u) - w` is independent. Returned in the order of `set`, with
    /// `u` last.
    fn circuit_of(&self, set: &[ElementId], u: ElementId) -> Result<Vec<ElementId>> {
        validate_set(self.ground_size(), set)?;
        validate_set(self.ground_size(), &[u])?;
        if set.contains(&u) {
            return Err(Error::Contract(format!("element {u} already belongs to the set")));
        }
        if !self.independent(set) {
            return Err(Error::Contract("circuit_of needs an independent set".into()));
        }
        let extended = with(set, u);
        if self.independent(&extended) {
            return Err(Error::Contract(format!("adding {u} keeps the set independent")));
        }
        let circuit: Vec<ElementId> = extended
            .iter()
            .copied()
            .filter(|&w| self.independent(&without(&extended, w)))
            .collect();
        let minimal = circuit.iter().all(|&w| self.independent(&without(&circuit, w)));
        if self.independent(&circuit) || !minimal || circuit.last() != Some(&u) {
            return Err(Error::Internal(format!(
                "probed set {circuit:?} is not a circuit; the oracle violates the matroid axioms"
            )));
        }
        Ok(circuit)
    }

    /// Strong basis exchange: for equal-size independent `b1`, `b2` and
    /// `u ∈ b1 \ b2`, finds `v ∈ b2 \ b1` such that both `b1 - u + v` and
    /// `b2 - v + u` are independent. Candidates are scanned in the order of
    /// `b2`.
    fn basis_exchange(&self, b1: &[ElementId], b2: &[ElementId], u: ElementId) -> Result<ElementId> {
        let n = self.ground_size();
        validate_set(n, b1)?;
        validate_set(n, b2)?;
        if !b1.contains(&u) || b2.contains(&u) {
            return Err(Error::Contract(format!("element {u} is not in b1 \\ b2")));
        }
        if b1.len() != b2.len() || !self.independent(b1) || !self.independent(b2) {
            return Err(Error::Contract(
                "basis_exchange needs two independent sets of equal size".into(),
            ));
        }
        let b1_minus_u = without(b1, u);
        for &v in b2.iter().filter(|v| !b1.contains(v)) {
            let left = with(&b1_minus_u, v);
            if !self.independent(&left) {
                continue;
            }
            let mut right = without(b2, v);
            right.push(u);
            if self.independent(&right) {
                debug_assert!(self.independent(&left) && self.independent(&right));
                return Ok(v);
            }
        }
        Err(Error::Internal(format!(
            "no exchange partner for {u}; the oracle violates the matroid axioms"
        )))
    }

    /// Block exchange: given independent `i`, a part `i1 ⊆ i` (with
    /// `i2 = i \ i1`) and independent `j`, returns a partition `(j1, j2)` of
    /// `j` such that `i1 ∪ j2` and `i2 ∪ j1` are both independent.
    ///
    /// Exhaustive over the `2^|j|` splits, so `|j|` is capped at
    /// [`EXCHANGE_PARTITION_CAP`].
    fn exchange_partition(
        &self,
        i: &[ElementId],
        i1: &[ElementId],
        j: &[ElementId],
    ) -> Result<(Vec<ElementId>, Vec<ElementId>)> {
        let n = self.ground_size();
        validate_set(n, i)?;
        validate_set(n, i1)?;
        validate_set(n, j)?;
        if j.len() > EXCHANGE_PARTITION_CAP {
            return Err(Error::Scale {
                what: "exchange_partition set J",
                size: j.len(),
                cap: EXCHANGE_PARTITION_CAP,
            });
        }
        if !i1.iter().all(|x| i.contains(x)) {
            return Err(Error::Contract("I1 must be a subset of I".into()));
        }
        if !self.independent(i) || !self.independent(j) {
            return Err(Error::Contract("exchange_partition needs independent I and J".into()));
        }
        let i2: Vec<ElementId> = i.iter().copied().filter(|x| !i1.contains(x)).collect();
        for mask in 0u32..(1u32 << j.len()) {
            let (mut j1, mut j2) = (Vec::new(), Vec::new());
            for (bit, &e) in j.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    j1.push(e);
                } else {
                    j2.push(e);
                }
            }
            if union_independent(self, i1, &j2) && union_independent(self, &i2, &j1) {
                return Ok((j1, j2));
            }
        }
        Err(Error::Internal("no block-exchange partition exists".into()))
    }
}

/// Largest `|J|` accepted by [`Matroid::exchange_partition`].
pub const EXCHANGE_PARTITION_CAP: usize = 20;

fn union_independent<M: Matroid + ?Sized>(m: &M, a: &[ElementId], b: &[ElementId]) -> bool {
    let mut u = a.to_vec();
    for &x in b {
        if !u.contains(&x) {
            u.push(x);
        }
    }
    m.independent(&u)
}

/// Calls `visit` once for every independent subset of `pool` (including the
/// empty set). Subsets are emitted as increasing index sequences into `pool`;
/// dependent prefixes are pruned, which is sound because independence is
/// closed under subsets.
pub fn visit_independent_subsets<M: Matroid + ?Sized>(
    m: &M,
    pool: &[ElementId],
    visit: &mut dyn FnMut(&[ElementId]),
) {
    fn go<M: Matroid + ?Sized>(
        m: &M,
        pool: &[ElementId],
        start: usize,
        current: &mut Vec<ElementId>,
        visit: &mut dyn FnMut(&[ElementId]),
    ) {
        visit(current);
        for idx in start..pool.len() {
            current.push(pool[idx]);
            if m.independent(current) {
                go(m, pool, idx + 1, current, visit);
            }
            current.pop();
        }
    }
    let mut current = Vec::new();
    go(m, pool, 0, &mut current, visit);
}

/// The independent subset of `pool` with the highest `score`. Ties go to the
/// smaller set, then to the lexicographically smaller one. The returned set is
/// sorted.
pub fn best_independent_subset<M: Matroid + ?Sized>(
    m: &M,
    pool: &[ElementId],
    score: &mut dyn FnMut(&[ElementId]) -> f64,
) -> (Vec<ElementId>, f64) {
    let mut sorted = pool.to_vec();
    sorted.sort_unstable();
    let mut best: Option<(Vec<ElementId>, f64)> = None;
    visit_independent_subsets(m, &sorted, &mut |s| {
        let v = score(s);
        let better = match &best {
            None => true,
            Some((b, bv)) => v > *bv || (v == *bv && (s.len(), s) < (b.len(), b.as_slice())),
        };
        if better {
            best = Some((s.to_vec(), v));
        }
    });
    best.expect("the empty set is always visited")
}

/// Uniform matroid `U(k, n)`: a set is independent iff it has at most `k`
/// elements.
#[derive(Debug, Clone)]
pub struct UniformMatroid {
    ground: usize,
    capacity: usize,
}

impl UniformMatroid {
    pub fn new(ground: usize, capacity: usize) -> Result<Self> {
        if capacity == 0 && ground > 0 {
            return Err(Error::Input("a uniform matroid of rank 0 has loops".into()));
        }
        Ok(UniformMatroid { ground, capacity })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}

impl Matroid for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        set.len() <= self.capacity
    }

    fn rank_total(&self) -> usize {
        self.capacity.min(self.ground)
    }
}

/// Partition matroid: every element belongs to one block, and a set is
/// independent iff it takes at most `capacities[b]` elements from block `b`.
#[derive(Debug, Clone)]
pub struct PartitionMatroid {
    blocks: Vec<usize>,
    capacities: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(blocks: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        if let Some(&b) = blocks.iter().find(|&&b| b >= capacities.len()) {
            return Err(Error::Input(format!(
                "block {b} has no capacity ({} capacities given)",
                capacities.len()
            )));
        }
        if let Some(b) = capacities.iter().position(|&c| c == 0) {
            if blocks.contains(&b) {
                return Err(Error::Input(format!("block {b} has capacity 0, its elements are loops")));
            }
        }
        Ok(PartitionMatroid { blocks, capacities })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }
}

impl Matroid for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.blocks.len()
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        let mut used = vec![0usize; self.capacities.len()];
        set.iter().all(|&e| {
            let b = self.blocks[e];
            used[b] += 1;
            used[b] <= self.capacities[b]
        })
    }

    fn rank_total(&self) -> usize {
        let mut sizes = vec![0usize; self.capacities.len()];
        for &b in &self.blocks {
            sizes[b] += 1;
        }
        sizes.iter().zip(&self.capacities).map(|(s, c)| s.min(c)).sum()
    }
}

/// Graphic (cycle) matroid of a multigraph: element `e` is the edge
/// `edges[e]`, and a set is independent iff its edges form a forest.
#[derive(Debug, Clone)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= vertices || b >= vertices {
                return Err(Error::Input(format!(
                    "edge {e} = ({a}, {b}) has an endpoint outside 0..{vertices}"
                )));
            }
            if a == b {
                return Err(Error::Input(format!("edge {e} is a self-loop")));
            }
        }
        Ok(GraphicMatroid { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Matroid for GraphicMatroid {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        for &e in set {
            let (a, b) = self.edges[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

/// Brute-force check of the matroid axioms and the derived-operation
/// contracts on every subset of a small ground set. Returns a description of
/// the first violation found.
pub fn find_axiom_violation<M: Matroid + ?Sized>(m: &M) -> Option<String> {
    let n = m.ground_size();
    assert!(n <= 12, "exhaustive axiom check is limited to 12 elements");
    let sets: Vec<Vec<ElementId>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|&e| mask >> e & 1 == 1).collect())
        .collect();
    let indep: Vec<bool> = sets.iter().map(|s| m.independent(s)).collect();
    if !indep[0] {
        return Some("the empty set is dependent".into());
    }
    for e in 0..n {
        if !indep[1 << e] {
            return Some(format!("element {e} is a loop"));
        }
    }
    let ranks: Vec<usize> = sets.iter().map(|s| m.rank_unchecked(s)).collect();
    for mask in 0usize..1 << n {
        // Downward closure: removing one element keeps independence.
        if indep[mask] {
            for e in 0..n {
                if mask >> e & 1 == 1 && !indep[mask & !(1 << e)] {
                    return Some(format!("{:?} independent but a subset is not", sets[mask]));
                }
            }
        }
        if ranks[mask] > sets[mask].len() || (indep[mask] && ranks[mask] != sets[mask].len()) {
            return Some(format!("rank of {:?} is inconsistent", sets[mask]));
        }
        // Rank monotone and submodular (local form).
        for e in 0..n {
            if mask >> e & 1 == 1 {
                continue;
            }
            let gain = ranks[mask | 1 << e] as isize - ranks[mask] as isize;
            if !(0..=1).contains(&gain) {
                return Some(format!("rank jumps by {gain} adding {e} to {:?}", sets[mask]));
            }
            for f in (e + 1)..n {
                if mask >> f & 1 == 1 {
                    continue;
                }
                let lhs = ranks[mask | 1 << e] + ranks[mask | 1 << f];
                let rhs = ranks[mask | 1 << e | 1 << f] + ranks[mask];
                if lhs < rhs {
                    return Some(format!("rank is not submodular at {:?}, {e}, {f}", sets[mask]));
                }
            }
        }
    }
    // Exchange axiom.
    for a in 0usize..1 << n {
        if !indep[a] {
            continue;
        }
        for b in 0usize..1 << n {
            if !indep[b] || sets[b].len() <= sets[a].len() {
                continue;
            }
            let extendable = (0..n).any(|x| b >> x & 1 == 1 && a >> x & 1 == 0 && indep[a | 1 << x]);
            if !extendable {
                return Some(format!("exchange fails for {:?} and {:?}", sets[a], sets[b]));
            }
        }
    }
    // Circuit contract.
    for mask in 0usize..1 << n {
        if !indep[mask] {
            continue;
        }
        for u in 0..n {
            if mask >> u & 1 == 1 || indep[mask | 1 << u] {
                continue;
            }
            let c = match m.circuit_of(&sets[mask], u) {
                Ok(c) => c,
                Err(err) => return Some(err.to_string()),
            };
            let cmask: usize = c.iter().map(|&e| 1usize << e).sum();
            if indep[cmask] || c.iter().any(|&e| !indep[cmask & !(1 << e)]) || !c.contains(&u) {
                return Some(format!("{c:?} is not the circuit of {:?} + {u}", sets[mask]));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;
    use rand::Rng;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    const D: usize = 3;

    fn triangle() -> GraphicMatroid {
        GraphicMatroid::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn independence_examples() {
        let u2 = UniformMatroid::new(4, 2).unwrap();
        assert!(!u2.is_independent(&[A, B, C]).unwrap());
        let part = PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap();
        assert!(part.is_independent(&[A, C]).unwrap());
        assert!(!part.is_independent(&[A, B]).unwrap());
        assert!(!triangle().is_independent(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn out_of_range_and_duplicates_rejected() {
        let u2 = UniformMatroid::new(3, 2).unwrap();
        assert!(matches!(u2.is_independent(&[5]), Err(Error::OutOfRange { id: 5, ground: 3 })));
        assert!(matches!(u2.rank(&[0, 0]), Err(Error::Input(_))));
    }

    #[test]
    fn loops_rejected_at_construction() {
        assert!(UniformMatroid::new(3, 0).is_err());
        assert!(PartitionMatroid::new(vec![0, 1], vec![1, 0]).is_err());
        assert!(GraphicMatroid::new(2, vec![(1, 1)]).is_err());
        assert!(GraphicMatroid::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn rank_examples() {
        let u2 = UniformMatroid::new(3, 2).unwrap();
        assert_eq!(u2.rank(&[A, B, C]).unwrap(), 2);
        assert_eq!(u2.rank(&[]).unwrap(), 0);
        assert_eq!(triangle().rank(&[0, 1, 2]).unwrap(), 2);
        assert_eq!(triangle().rank_total(), 2);
        let part = PartitionMatroid::new(vec![0, 0, 1, 2, 2, 2], vec![1, 3, 2]).unwrap();
        assert_eq!(part.rank_total(), 4);
    }

    #[test]
    fn span_examples() {
        let u1 = UniformMatroid::new(2, 1).unwrap();
        assert!(u1.spans(&[A], B).unwrap());
        assert!(!u1.spans(&[], A).unwrap());
        assert!(triangle().spans(&[0, 1], 2).unwrap());
    }

    #[test]
    fn circuit_examples() {
        let u2 = UniformMatroid::new(3, 2).unwrap();
        assert_eq!(u2.circuit_of(&[A, B], C).unwrap(), vec![A, B, C]);
        assert_eq!(triangle().circuit_of(&[0, 1], 2).unwrap(), vec![0, 1, 2]);
        let part = PartitionMatroid::new(vec![0, 0], vec![1]).unwrap();
        assert_eq!(part.circuit_of(&[A], B).unwrap(), vec![A, B]);
    }

    #[test]
    fn circuit_preconditions() {
        let u2 = UniformMatroid::new(4, 2).unwrap();
        assert!(matches!(u2.circuit_of(&[A], B), Err(Error::Contract(_))));
        assert!(matches!(u2.circuit_of(&[A, B, C], D), Err(Error::Contract(_))));
        assert!(matches!(u2.circuit_of(&[A, B], A), Err(Error::Contract(_))));
    }

    #[test]
    fn circuit_ignores_elements_outside_it() {
        // Path 0-1-2-3 plus a chord (0,2): adding the chord closes only the
        // first two edges.
        let g = GraphicMatroid::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        assert_eq!(g.circuit_of(&[0, 1, 2], 3).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn basis_exchange_examples() {
        let u2 = UniformMatroid::new(4, 2).unwrap();
        let v = u2.basis_exchange(&[A, B], &[C, D], A).unwrap();
        assert!(v == C || v == D);
        assert!(matches!(u2.basis_exchange(&[A, B], &[A, B], A), Err(Error::Contract(_))));

        // 4-cycle e1=(0,1), e2=(1,2), e3=(2,3), e4=(3,0).
        let square = GraphicMatroid::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(square.basis_exchange(&[0, 1, 2], &[1, 2, 3], 0).unwrap(), 3);
    }

    #[test]
    fn four_cycle_exchange_matches_brute_force() {
        let square = GraphicMatroid::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (b1, b2) = ([0, 1, 2], [1, 2, 3]);
        let valid: Vec<usize> = b2
            .iter()
            .copied()
            .filter(|v| !b1.contains(v))
            .filter(|&v| {
                square.independent(&[1, 2, v]) && {
                    let right: Vec<usize> = b2.iter().copied().filter(|&x| x != v).chain([0]).collect();
                    square.independent(&right)
                }
            })
            .collect();
        assert_eq!(valid, vec![3]);
    }

    #[test]
    fn exchange_partition_examples() {
        let u3 = UniformMatroid::new(4, 3).unwrap();
        assert_eq!(u3.exchange_partition(&[A, B], &[A], &[]).unwrap(), (vec![], vec![]));
        let (j1, j2) = u3.exchange_partition(&[A, B], &[A], &[C]).unwrap();
        assert_eq!(j1.len() + j2.len(), 1);
        let big = UniformMatroid::new(30, 25).unwrap();
        let j: Vec<usize> = (0..21).collect();
        assert!(matches!(big.exchange_partition(&[], &[], &j), Err(Error::Scale { .. })));
    }

    #[test]
    fn exchange_partition_on_random_graphic_instances() {
        let mut rng = CounterRng::new(17);
        for _ in 0..40 {
            let edges: Vec<(usize, usize)> = (0..8)
                .map(|_| {
                    let a = rng.random_range(0..4);
                    let b = (a + rng.random_range(1..4)) % 4;
                    (a, b)
                })
                .collect();
            let g = GraphicMatroid::new(4, edges).unwrap();
            let mut bases = Vec::new();
            visit_independent_subsets(&g, &(0..8).collect::<Vec<_>>(), &mut |s| {
                if s.len() == g.rank_total() {
                    bases.push(s.to_vec());
                }
            });
            let i = &bases[rng.random_range(0..bases.len())];
            let j = &bases[rng.random_range(0..bases.len())];
            let i1: Vec<usize> = i.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            let i2: Vec<usize> = i.iter().copied().filter(|x| !i1.contains(x)).collect();
            let (j1, j2) = g.exchange_partition(i, &i1, j).unwrap();
            assert_eq!(j1.len() + j2.len(), j.len());
            let mut left = i1.clone();
            left.extend(j2.iter().filter(|x| !i1.contains(x)));
            let mut right = i2.clone();
            right.extend(j1.iter().filter(|x| !i2.contains(x)));
            assert!(g.is_independent(&left).unwrap());
            assert!(g.is_independent(&right).unwrap());
        }
    }

    #[test]
    fn concrete_matroids_satisfy_axioms() {
        let mut rng = CounterRng::new(5);
        for _ in 0..10 {
            let n = rng.random_range(1..=8);
            let u = UniformMatroid::new(n, rng.random_range(1..=n)).unwrap();
            assert_eq!(find_axiom_violation(&u), None);
            let caps = vec![rng.random_range(1..=2), rng.random_range(1..=3)];
            let blocks = (0..n).map(|_| rng.random_range(0..2)).collect();
            let p = PartitionMatroid::new(blocks, caps).unwrap();
            assert_eq!(find_axiom_violation(&p), None);
            let edges = (0..n)
                .map(|_| {
                    let a = rng.random_range(0..5);
                    (a, (a + rng.random_range(1..5)) % 5)
                })
                .collect();
            let g = GraphicMatroid::new(5, edges).unwrap();
            assert_eq!(find_axiom_violation(&g), None);
        }
    }

    /// Not a matroid: {0,1} and {2} are maximal independent sets.
    struct Broken;

    impl Matroid for Broken {
        fn ground_size(&self) -> usize {
            3
        }
        fn independent(&self, set: &[ElementId]) -> bool {
            set.len() <= 1 || (set.len() == 2 && set.contains(&0) && set.contains(&1))
        }
    }

    #[test]
    fn axiom_checker_detects_non_matroid() {
        assert!(find_axiom_violation(&Broken).is_some());
    }

    #[test]
    fn visits_every_independent_subset_once() {
        let u2 = UniformMatroid::new(5, 2).unwrap();
        let mut count = 0;
        visit_independent_subsets(&u2, &[0, 1, 2, 3, 4], &mut |_| count += 1);
        assert_eq!(count, 1 + 5 + 10);
    }
}
