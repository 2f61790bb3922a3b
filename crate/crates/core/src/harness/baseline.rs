//! Reference solutions: exhaustive optimum and offline greedy.

use crate::error::{Error, Result};
use crate::matroid::{best_independent_subset, ElementId, Matroid};
use crate::objective::SubmodularFn;

/// Default ground-set cap for [`brute_force_opt`].
pub const BRUTE_FORCE_CAP: usize = 18;

/// Exact maximizer over all independent sets. Ties go to the smaller, then
/// lexicographically smaller set.
pub fn brute_force_opt<M, F>(m: &M, f: &F, cap: usize) -> Result<(Vec<ElementId>, f64)>
where
    M: Matroid + ?Sized,
    F: SubmodularFn + ?Sized,
{
    let n = m.ground_size();
    if f.ground_size() != n {
        return Err(Error::Input("objective and matroid ground sizes differ".into()));
    }
    if n > cap {
        return Err(Error::Scale { what: "brute-force ground set", size: n, cap });
    }
    let pool: Vec<ElementId> = (0..n).collect();
    Ok(best_independent_subset(m, &pool, &mut |s| f.eval(s)))
}

/// Greedy: repeatedly add the feasible element with the largest positive
/// marginal (lowest id on ties).
pub fn offline_greedy<M, F>(m: &M, f: &F) -> Vec<ElementId>
where
    M: Matroid + ?Sized,
    F: SubmodularFn + ?Sized,
{
    let n = m.ground_size();
    let mut set: Vec<ElementId> = Vec::new();
    let mut value = f.eval(&set);
    loop {
        let mut best: Option<(ElementId, f64)> = None;
        for u in 0..n {
            if set.contains(&u) {
                continue;
            }
            set.push(u);
            if m.independent(&set) {
                let v = f.eval(&set);
                if v > value && best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((u, v));
                }
            }
            set.pop();
        }
        match best {
            Some((u, v)) => {
                set.push(u);
                value = v;
            }
            None => return set,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{PartitionMatroid, UniformMatroid};
    use crate::objective::CoverageFunction;
    use crate::rng::CounterRng;
    use rand::Rng;

    #[test]
    fn brute_force_examples() {
        let m = UniformMatroid::new(3, 2).unwrap();
        let f = CoverageFunction::modular(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(brute_force_opt(&m, &f, BRUTE_FORCE_CAP).unwrap(), (vec![0, 2], 5.0));
        let zero = CoverageFunction::modular(vec![0.0; 3]).unwrap();
        assert_eq!(brute_force_opt(&m, &zero, BRUTE_FORCE_CAP).unwrap(), (vec![], 0.0));
        let big = UniformMatroid::new(19, 2).unwrap();
        let g = CoverageFunction::modular(vec![1.0; 19]).unwrap();
        assert!(matches!(brute_force_opt(&big, &g, BRUTE_FORCE_CAP), Err(Error::Scale { .. })));
    }

    #[test]
    fn greedy_examples() {
        let m = UniformMatroid::new(4, 2).unwrap();
        let f = CoverageFunction::modular(vec![1.0, 4.0, 2.0, 3.0]).unwrap();
        let mut g = offline_greedy(&m, &f);
        g.sort_unstable();
        assert_eq!(g, vec![1, 3]);
        let empty = UniformMatroid::new(0, 0).unwrap();
        let none = CoverageFunction::modular(vec![]).unwrap();
        assert!(offline_greedy(&empty, &none).is_empty());
    }

    #[test]
    fn greedy_is_half_approximate() {
        let mut rng = CounterRng::new(2);
        for _ in 0..100 {
            let n = rng.random_range(3..11);
            let blocks: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let m = PartitionMatroid::new(blocks, vec![1, 2, 1]).unwrap();
            let universe = rng.random_range(3..10);
            let sets = (0..n).map(|_| (0..universe).filter(|_| rng.random_bool(0.3)).collect()).collect();
            let weights = (0..universe).map(|_| rng.random_range(0.1..2.0)).collect();
            let f = CoverageFunction::new(sets, weights).unwrap();
            let (_, opt) = brute_force_opt(&m, &f, BRUTE_FORCE_CAP).unwrap();
            let g = offline_greedy(&m, &f);
            assert!(m.independent(&g));
            assert!(f.eval(&g) >= opt / 2.0 - 1e-9);
        }
    }
}
