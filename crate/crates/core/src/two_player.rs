//! One-way two-player protocol: Alice holds `N_A`, Bob holds `N_B`, and Alice
//! sends `O(rank)` elements.
//!
//! Alice sends her own optimum, the sets of an `h`-step discretized continuous
//! greedy over `N_A`, and the independent `W ⊆ N_A` maximizing `F(x ∨ 1_W)`
//! for the greedy point `x`. Bob returns the best independent subset of what
//! he received plus his own elements. Both sides search exhaustively, so the
//! ground set is capped.

use crate::continuous_greedy::discretized_continuous_greedy;
use crate::error::{Error, Result};
use crate::matroid::{best_independent_subset, validate_set, ElementId, Matroid};
use crate::multilinear::Multilinear;
use crate::objective::SubmodularFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoPlayerConfig {
    /// Greedy steps; the approximation guarantee needs `h = 125`.
    pub h: usize,
    /// Largest pool either player searches exhaustively.
    pub cap: usize,
}

impl TwoPlayerConfig {
    pub const GUARANTEED_H: usize = 125;
    pub const DEFAULT_CAP: usize = 16;

    /// Whether the configuration is one the ratio bound applies to.
    pub fn guaranteed(&self) -> bool {
        self.h >= Self::GUARANTEED_H
    }
}

impl Default for TwoPlayerConfig {
    fn default() -> Self {
        TwoPlayerConfig { h: Self::GUARANTEED_H, cap: Self::DEFAULT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AliceMessage {
    /// Best independent subset of `N_A`.
    pub own_best: Vec<ElementId>,
    /// `W`, the best independent completion of the greedy point.
    pub completion: Vec<ElementId>,
    /// `C_1..C_h`.
    pub greedy_sets: Vec<Vec<ElementId>>,
    /// The union of all of the above, sorted: the elements actually sent.
    pub elements: Vec<ElementId>,
}

fn require_exact(oracle: &Multilinear<'_>) -> Result<()> {
    if !oracle.is_exact() {
        return Err(Error::Config("the two-player protocol needs an exact multilinear oracle".into()));
    }
    if !oracle.objective().is_monotone() {
        return Err(Error::Config("the two-player protocol needs a monotone objective".into()));
    }
    Ok(())
}

fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::Scale { what, size, cap });
    }
    Ok(())
}

pub fn alice<M: Matroid + ?Sized>(
    m: &M,
    oracle: Multilinear<'_>,
    alice_elements: &[ElementId],
    cfg: &TwoPlayerConfig,
) -> Result<AliceMessage> {
    require_exact(&oracle)?;
    let n = m.ground_size();
    if oracle.ground_size() != n {
        return Err(Error::Input("objective and matroid ground sizes differ".into()));
    }
    validate_set(n, alice_elements)?;
    check_cap("Alice's ground set", alice_elements.len(), cfg.cap)?;
    let f = oracle.objective();
    let (own_best, _) = best_independent_subset(m, alice_elements, &mut |s| f.eval(s));
    let greedy = discretized_continuous_greedy(m, oracle, alice_elements, cfg.h)?;
    let mut failure = None;
    let (completion, _) = best_independent_subset(m, alice_elements, &mut |s| {
        match greedy.point.join_indicator(s).and_then(|y| oracle.value(&y)) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut elements: Vec<ElementId> = own_best
        .iter()
        .chain(&completion)
        .chain(greedy.sets.iter().flatten())
        .copied()
        .collect();
    elements.sort_unstable();
    elements.dedup();
    Ok(AliceMessage { own_best, completion, greedy_sets: greedy.sets, elements })
}

pub fn bob<M, F>(m: &M, f: &F, message: &AliceMessage, bob_elements: &[ElementId], cap: usize) -> Result<Vec<ElementId>>
where
    M: Matroid + ?Sized,
    F: SubmodularFn + ?Sized,
{
    let n = m.ground_size();
    validate_set(n, bob_elements)?;
    let mut pool = message.elements.clone();
    pool.extend(bob_elements.iter().copied().filter(|e| !message.elements.contains(e)));
    validate_set(n, &pool)?;
    check_cap("Bob's candidate pool", pool.len(), cap)?;
    let (best, _) = best_independent_subset(m, &pool, &mut |s| f.eval(s));
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TwoPlayerOutput {
    pub message: AliceMessage,
    pub solution: Vec<ElementId>,
    pub value: f64,
}

/// Runs both sides. `alice_elements` is `N_A`; `N_B` is its complement.
pub fn run_two_player<M: Matroid + ?Sized>(
    m: &M,
    oracle: Multilinear<'_>,
    alice_elements: &[ElementId],
    cfg: &TwoPlayerConfig,
) -> Result<TwoPlayerOutput> {
    let n = m.ground_size();
    validate_set(n, alice_elements)?;
    let bob_elements: Vec<ElementId> = (0..n).filter(|e| !alice_elements.contains(e)).collect();
    let message = alice(m, oracle, alice_elements, cfg)?;
    let f = oracle.objective();
    let solution = bob(m, f, &message, &bob_elements, cfg.cap)?;
    if !m.independent(&solution) {
        return Err(Error::Internal("Bob returned a dependent set".into()));
    }
    let value = f.eval(&solution);
    Ok(TwoPlayerOutput { message, solution, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::UniformMatroid;
    use crate::objective::{CoverageFunction, CutFunction};

    #[test]
    fn empty_alice_sends_nothing() {
        let m = UniformMatroid::new(3, 2).unwrap();
        let f = CoverageFunction::modular(vec![1.0, 2.0, 3.0]).unwrap();
        let out = run_two_player(&m, Multilinear::Coverage(&f), &[], &TwoPlayerConfig::default()).unwrap();
        assert!(out.message.elements.is_empty());
        assert_eq!(out.solution, vec![1, 2]);
    }

    #[test]
    fn modular_rank_one_example() {
        let m = UniformMatroid::new(3, 1).unwrap();
        let f = CoverageFunction::modular(vec![1.0, 2.0, 0.5]).unwrap();
        let cfg = TwoPlayerConfig { h: 5, ..TwoPlayerConfig::default() };
        let msg = alice(&m, Multilinear::Coverage(&f), &[0, 1], &cfg).unwrap();
        assert_eq!(msg.own_best, vec![1]);
        assert!(msg.greedy_sets.iter().all(|c| c == &vec![1]));
        assert!(msg.elements.iter().all(|e| [0, 1].contains(e)));
        let r = bob(&m, &f, &msg, &[2], cfg.cap).unwrap();
        assert_eq!(r, vec![1]);
    }

    #[test]
    fn alice_owns_everything() {
        let m = UniformMatroid::new(4, 2).unwrap();
        let f = CoverageFunction::new(vec![vec![0, 1], vec![1], vec![2], vec![0]], vec![1.0, 2.0, 1.5]).unwrap();
        let cfg = TwoPlayerConfig { h: 10, ..TwoPlayerConfig::default() };
        let out = run_two_player(&m, Multilinear::Coverage(&f), &[0, 1, 2, 3], &cfg).unwrap();
        assert_eq!(out.value, 4.5);
        assert!(out.message.elements.len() <= (cfg.h + 2) * 2);
    }

    #[test]
    fn caps_and_oracle_requirements() {
        let m = UniformMatroid::new(20, 2).unwrap();
        let f = CoverageFunction::modular(vec![1.0; 20]).unwrap();
        let all: Vec<ElementId> = (0..20).collect();
        let err = alice(&m, Multilinear::Coverage(&f), &all, &TwoPlayerConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Scale { cap: 16, .. }));
        let sampled = Multilinear::Sampled(&f, crate::multilinear::EstimatorConfig::default());
        assert!(matches!(alice(&m, sampled, &[0], &TwoPlayerConfig::default()), Err(Error::Config(_))));
        let cut = CutFunction::new(2, vec![(0, 1, 1.0)]).unwrap();
        let m2 = UniformMatroid::new(2, 1).unwrap();
        assert!(alice(&m2, Multilinear::Enumerated(&cut), &[0], &TwoPlayerConfig::default()).is_err());
    }
}
