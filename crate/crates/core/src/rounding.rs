//! Randomized swap rounding of an explicit convex combination of independent
//! sets.
//!
//! Sets of different sizes are padded with dummy elements that are free in
//! the matroid and invisible to the objective, so every padded set is a base
//! of the same truncated matroid. Bases are merged left to right; the output
//! has the same element marginals as the fractional point and, for
//! submodular objectives, expected value at least `F` of the point.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matroid::{validate_set, ElementId, Matroid};
use crate::multilinear::FractionalPoint;
use crate::objective::SubmodularFn;
use crate::rng::{mix64, CounterRng};
use crate::tolerance::TOL;

/// Weighted independent sets with total weight at most one; the missing
/// weight sits on the empty set.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCombination {
    ground: usize,
    entries: Vec<(Vec<ElementId>, f64)>,
}

impl ConvexCombination {
    pub fn new(ground: usize, entries: Vec<(Vec<ElementId>, f64)>) -> Result<Self> {
        let mut total = 0.0;
        for (set, w) in &entries {
            validate_set(ground, set)?;
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::Input(format!("combination weight {w} is not positive")));
            }
            total += w;
        }
        if total > 1.0 + TOL {
            return Err(Error::Input(format!("combination weights sum to {total} > 1")));
        }
        Ok(ConvexCombination { ground, entries })
    }

    /// Equal weights `1/count` on each set.
    pub fn uniform(ground: usize, sets: Vec<Vec<ElementId>>, count: usize) -> Result<Self> {
        let w = 1.0 / count as f64;
        Self::new(ground, sets.into_iter().filter(|s| !s.is_empty()).map(|s| (s, w)).collect())
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn entries(&self) -> &[(Vec<ElementId>, f64)] {
        &self.entries
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// The point `Σ w_k 1_{S_k}`.
    pub fn point(&self) -> Result<FractionalPoint> {
        let mut x = FractionalPoint::zero(self.ground);
        for (set, w) in &self.entries {
            x.add_scaled(set, *w)?;
        }
        Ok(x)
    }

    fn check_independent<M: Matroid + ?Sized>(&self, m: &M) -> Result<()> {
        if m.ground_size() != self.ground {
            return Err(Error::Input(format!(
                "combination has ground size {}, matroid has {}",
                self.ground,
                m.ground_size()
            )));
        }
        for (set, _) in &self.entries {
            if !m.independent(set) {
                return Err(Error::Input(format!("combination set {set:?} is dependent")));
            }
        }
        Ok(())
    }
}

/// `M` extended with `dummies` free elements (ids `n..n+dummies`) and
/// truncated to rank `dummies`.
struct Padded<'a, M: ?Sized> {
    inner: &'a M,
    dummies: usize,
}

impl<M: Matroid + ?Sized> Matroid for Padded<'_, M> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size() + self.dummies
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        let n = self.inner.ground_size();
        let real: Vec<ElementId> = set.iter().copied().filter(|&e| e < n).collect();
        set.len() <= self.dummies && self.inner.independent(&real)
    }
}

/// One randomized swap rounding of `comb`. The result is independent and
/// contained in the union of the listed sets.
pub fn swap_round<M: Matroid + ?Sized>(m: &M, comb: &ConvexCombination, seed: u64) -> Result<Vec<ElementId>> {
    comb.check_independent(m)?;
    let width = comb.entries.iter().map(|(s, _)| s.len()).max().unwrap_or(0);
    if width == 0 {
        return Ok(Vec::new());
    }
    let n = m.ground_size();
    let padded = Padded { inner: m, dummies: width };
    let pad = |set: &[ElementId]| -> Vec<ElementId> {
        let mut out = set.to_vec();
        out.extend((0..width - set.len()).map(|d| n + d));
        out
    };
    let mut bases: Vec<(Vec<ElementId>, f64)> = comb.entries.iter().map(|(s, w)| (pad(s), *w)).collect();
    let deficit = 1.0 - comb.total_weight();
    if deficit > TOL {
        bases.push((pad(&[]), deficit));
    }

    let mut rng = CounterRng::new(seed);
    let mut iter = bases.into_iter();
    let (mut merged, mut weight) = iter.next().expect("at least one entry");
    for (mut other, w) in iter {
        while let Some(&u) = merged.iter().filter(|e| !other.contains(e)).min() {
            let v = padded.basis_exchange(&merged, &other, u)?;
            if rng.next_unit() < weight / (weight + w) {
                let pos = other.iter().position(|&e| e == v).expect("v is in the other base");
                other[pos] = u;
            } else {
                let pos = merged.iter().position(|&e| e == u).expect("u is in the merged base");
                merged[pos] = v;
            }
        }
        weight += w;
    }
    let mut out: Vec<ElementId> = merged.into_iter().filter(|&e| e < n).collect();
    out.sort_unstable();
    if !m.independent(&out) {
        return Err(Error::Internal(format!("swap rounding produced dependent set {out:?}")));
    }
    Ok(out)
}

/// Amplified rounding settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundingConfig {
    pub trials: usize,
    pub seed: u64,
}

impl RoundingConfig {
    pub const DEFAULT_TRIALS: usize = 32;
}

impl Default for RoundingConfig {
    fn default() -> Self {
        RoundingConfig { trials: Self::DEFAULT_TRIALS, seed: 0 }
    }
}

/// The best of `trials` swap roundings and of the listed sets themselves,
/// together with its value. Ties go to the earliest candidate: listed sets in
/// order, then trials in order.
pub fn round_best_of<M, F>(
    m: &M,
    comb: &ConvexCombination,
    f: &F,
    cfg: &RoundingConfig,
) -> Result<(Vec<ElementId>, f64)>
where
    M: Matroid + ?Sized,
    F: SubmodularFn + ?Sized,
{
    if cfg.trials == 0 {
        return Err(Error::Config("rounding needs at least one trial".into()));
    }
    comb.check_independent(m)?;
    if f.ground_size() != m.ground_size() {
        return Err(Error::Input("objective and matroid ground sizes differ".into()));
    }
    let rounded: Vec<Vec<ElementId>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| swap_round(m, comb, mix64(cfg.seed, t as u64)))
        .collect::<Result<_>>()?;
    let mut best: Vec<ElementId> = Vec::new();
    let mut best_value = f.eval(&best);
    let listed = comb.entries.iter().map(|(s, _)| s);
    for set in listed.chain(rounded.iter()) {
        let v = f.eval(set);
        if v > best_value {
            best_value = v;
            best = set.clone();
        }
    }
    Ok((best, best_value))
}
