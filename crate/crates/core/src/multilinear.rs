//! The multilinear extension `F(x) = E[f(R(x))]` and its partial derivatives.
//!
//! `R(x)` includes every element `u` independently with probability `x_u`.
//! Coverage functions have a closed form; any oracle can be evaluated exactly
//! by enumerating the support (small supports only) or estimated by
//! Monte-Carlo sampling with counter-based seeds.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matroid::{validate_set, ElementId};
use crate::objective::{CoverageFunction, SubmodularFn};
use crate::rng::{mix64, unit_f64};

/// Coordinates within this distance outside `[0, 1]` are clamped instead of
/// rejected (sums like `5 × 0.2` land a few ulps above one).
const CLAMP_SLACK: f64 = 1e-12;

/// A point of `[0,1]^N` stored sparsely; absent coordinates are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint {
    ground: usize,
    coords: BTreeMap<ElementId, f64>,
}

impl FractionalPoint {
    pub fn zero(ground: usize) -> Self {
        FractionalPoint { ground, coords: BTreeMap::new() }
    }

    /// The indicator vector `1_S`.
    pub fn indicator(ground: usize, set: &[ElementId]) -> Result<Self> {
        validate_set(ground, set)?;
        Ok(FractionalPoint { ground, coords: set.iter().map(|&e| (e, 1.0)).collect() })
    }

    pub fn from_pairs(ground: usize, pairs: impl IntoIterator<Item = (ElementId, f64)>) -> Result<Self> {
        let mut x = FractionalPoint::zero(ground);
        for (e, v) in pairs {
            x.set(e, v)?;
        }
        Ok(x)
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn get(&self, e: ElementId) -> f64 {
        self.coords.get(&e).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, e: ElementId, value: f64) -> Result<()> {
        if e >= self.ground {
            return Err(Error::OutOfRange { id: e, ground: self.ground });
        }
        if !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&value) {
            return Err(Error::Input(format!("coordinate {e} = {value} is outside [0, 1]")));
        }
        let value = value.clamp(0.0, 1.0);
        if value == 0.0 {
            self.coords.remove(&e);
        } else {
            self.coords.insert(e, value);
        }
        Ok(())
    }

    /// `x + weight · 1_S`.
    pub fn add_scaled(&mut self, set: &[ElementId], weight: f64) -> Result<()> {
        validate_set(self.ground, set)?;
        for &e in set {
            self.set(e, self.get(e) + weight)?;
        }
        Ok(())
    }

    /// Coordinate-wise maximum `x ∨ 1_S`.
    pub fn join_indicator(&self, set: &[ElementId]) -> Result<Self> {
        validate_set(self.ground, set)?;
        let mut out = self.clone();
        for &e in set {
            out.coords.insert(e, 1.0);
        }
        Ok(out)
    }

    /// Non-zero coordinates in increasing element order.
    pub fn support(&self) -> impl Iterator<Item = (ElementId, f64)> + '_ {
        self.coords.iter().map(|(&e, &v)| (e, v))
    }

    pub fn support_len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.values().all(|&v| v == 1.0)
    }

    pub fn max_coordinate(&self) -> f64 {
        self.coords.values().fold(0.0, |a, &b| a.max(b))
    }

    fn integral_support(&self) -> Vec<ElementId> {
        self.coords.keys().copied().collect()
    }
}

/// Monte-Carlo settings. Sample `i` draws its inclusions from the key
/// `mix64(base_seed, i)`, so estimates are reproducible and independent of
/// evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub sample_count: usize,
    pub base_seed: u64,
}

impl EstimatorConfig {
    pub const DEFAULT_SAMPLES: usize = 2000;

    pub fn new(sample_count: usize, base_seed: u64) -> Result<Self> {
        if sample_count == 0 {
            return Err(Error::Config("sample_count must be at least 1".into()));
        }
        Ok(EstimatorConfig { sample_count, base_seed })
    }
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig { sample_count: Self::DEFAULT_SAMPLES, base_seed: 0 }
    }
}

/// Mean and standard error of a Monte-Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Pairwise summation; the result only depends on the order of `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

fn check_ground(f_ground: usize, x: &FractionalPoint) -> Result<()> {
    if f_ground != x.ground {
        return Err(Error::Input(format!(
            "point has ground size {}, objective has {f_ground}",
            x.ground
        )));
    }
    Ok(())
}

/// The random set `R(x)` of sample `index`, skipping `exclude`.
fn sample_set(x: &FractionalPoint, key: u64, exclude: Option<ElementId>, out: &mut Vec<ElementId>) {
    out.clear();
    for (e, p) in x.support() {
        if Some(e) == exclude {
            continue;
        }
        if p >= 1.0 || unit_f64(mix64(key, e as u64)) < p {
            out.push(e);
        }
    }
}

fn sample_values<G>(cfg: &EstimatorConfig, per_sample: G) -> Vec<f64>
where
    G: Fn(u64, &mut Vec<ElementId>) -> f64 + Sync,
{
    let run = |i: usize, buf: &mut Vec<ElementId>| per_sample(mix64(cfg.base_seed, i as u64), buf);
    if cfg.sample_count < 512 {
        let mut buf = Vec::new();
        (0..cfg.sample_count).map(|i| run(i, &mut buf)).collect()
    } else {
        (0..cfg.sample_count)
            .into_par_iter()
            .map_init(Vec::new, |buf, i| run(i, buf))
            .collect()
    }
}

/// Sample mean and its standard error.
pub fn summarize(values: &[f64]) -> Estimate {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    if values.len() < 2 {
        return Estimate { mean, std_error: 0.0 };
    }
    let squares: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let variance = pairwise_sum(&squares) / (n - 1.0);
    Estimate { mean, std_error: (variance / n).sqrt() }
}

/// Monte-Carlo estimate of `F(x)` with its standard error.
pub fn estimate_f_with_error<F: SubmodularFn + ?Sized>(
    f: &F,
    x: &FractionalPoint,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    check_ground(f.ground_size(), x)?;
    if cfg.sample_count == 0 {
        return Err(Error::Config("sample_count must be at least 1".into()));
    }
    if x.is_integral() {
        return Ok(Estimate { mean: f.eval(&x.integral_support()), std_error: 0.0 });
    }
    let values = sample_values(cfg, |key, buf| {
        sample_set(x, key, None, buf);
        f.eval(buf)
    });
    Ok(summarize(&values))
}

pub fn estimate_f<F: SubmodularFn + ?Sized>(f: &F, x: &FractionalPoint, cfg: &EstimatorConfig) -> Result<f64> {
    Ok(estimate_f_with_error(f, x, cfg)?.mean)
}

/// Estimate of `∂_u F(x) = F(x ∨ 1_u) - F(x ∧ 1_{N-u})` using common random
/// numbers: both endpoints share the inclusion draws of every element `≠ u`.
pub fn estimate_partial<F: SubmodularFn + ?Sized>(
    f: &F,
    x: &FractionalPoint,
    u: ElementId,
    cfg: &EstimatorConfig,
) -> Result<f64> {
    check_ground(f.ground_size(), x)?;
    validate_set(f.ground_size(), &[u])?;
    if cfg.sample_count == 0 {
        return Err(Error::Config("sample_count must be at least 1".into()));
    }
    let others_integral = x.support().all(|(e, p)| e == u || p == 1.0);
    if others_integral {
        let rest: Vec<ElementId> = x.support().map(|(e, _)| e).filter(|&e| e != u).collect();
        return Ok(f.marginal_unchecked(u, &rest));
    }
    let values = sample_values(cfg, |key, buf| {
        sample_set(x, key, Some(u), buf);
        f.marginal_unchecked(u, buf)
    });
    Ok(pairwise_sum(&values) / values.len() as f64)
}

/// Closed form for coverage: `Σ_v w_v (1 - Π_{e covers v} (1 - x_e))`.
pub fn coverage_f(c: &CoverageFunction, x: &FractionalPoint) -> Result<f64> {
    check_ground(c.ground_size(), x)?;
    let mut total = 0.0;
    for (p, &w) in c.weights().iter().enumerate() {
        let miss: f64 = c.covered_by(p).iter().map(|&e| 1.0 - x.get(e)).product();
        total += w * (1.0 - miss);
    }
    Ok(total)
}

/// Closed form for coverage: `∂_u F(x) = Σ_{v ∈ U_u} w_v Π_{e covers v, e ≠ u} (1 - x_e)`.
pub fn coverage_partial(c: &CoverageFunction, x: &FractionalPoint, u: ElementId) -> Result<f64> {
    check_ground(c.ground_size(), x)?;
    validate_set(c.ground_size(), &[u])?;
    let mut total = 0.0;
    for &p in &c.sets()[u] {
        let miss: f64 = c
            .covered_by(p)
            .iter()
            .filter(|&&e| e != u)
            .map(|&e| 1.0 - x.get(e))
            .product();
        total += c.weights()[p] * miss;
    }
    Ok(total)
}

/// Largest fractional support [`enumerate_f`] accepts.
pub const ENUMERATION_CAP: usize = 20;

/// Exact `F(x)` by summing `f(S) Π x_u Π (1 - x_u)` over every subset of the
/// fractional support (coordinates equal to one are always included).
pub fn enumerate_f<F: SubmodularFn + ?Sized>(f: &F, x: &FractionalPoint) -> Result<f64> {
    check_ground(f.ground_size(), x)?;
    let fixed: Vec<ElementId> = x.support().filter(|&(_, p)| p == 1.0).map(|(e, _)| e).collect();
    let free: Vec<(ElementId, f64)> = x.support().filter(|&(_, p)| p < 1.0).collect();
    if free.len() > ENUMERATION_CAP {
        return Err(Error::Scale { what: "fractional support", size: free.len(), cap: ENUMERATION_CAP });
    }
    let mut terms = Vec::with_capacity(1 << free.len());
    let mut set = Vec::with_capacity(fixed.len() + free.len());
    for mask in 0u32..(1u32 << free.len()) {
        set.clear();
        set.extend_from_slice(&fixed);
        let mut prob = 1.0;
        for (bit, &(e, p)) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                set.push(e);
                prob *= p;
            } else {
                prob *= 1.0 - p;
            }
        }
        terms.push(prob * f.eval(&set));
    }
    Ok(pairwise_sum(&terms))
}

/// How `F` and `∂_u F` are obtained.
#[derive(Clone, Copy)]
pub enum Multilinear<'a> {
    /// Closed form for coverage functions.
    Coverage(&'a CoverageFunction),
    /// Exact subset enumeration over the fractional support.
    Enumerated(&'a dyn SubmodularFn),
    /// Monte-Carlo estimate.
    Sampled(&'a dyn SubmodularFn, EstimatorConfig),
}

impl<'a> Multilinear<'a> {
    pub fn objective(&self) -> &'a dyn SubmodularFn {
        match *self {
            Multilinear::Coverage(c) => c,
            Multilinear::Enumerated(f) | Multilinear::Sampled(f, _) => f,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Multilinear::Sampled(..))
    }

    pub fn ground_size(&self) -> usize {
        self.objective().ground_size()
    }

    pub fn value(&self, x: &FractionalPoint) -> Result<f64> {
        match self {
            Multilinear::Coverage(c) => coverage_f(c, x),
            Multilinear::Enumerated(f) => enumerate_f(*f, x),
            Multilinear::Sampled(f, cfg) => estimate_f(*f, x, cfg),
        }
    }

    pub fn partial(&self, x: &FractionalPoint, u: ElementId) -> Result<f64> {
        match self {
            Multilinear::Coverage(c) => coverage_partial(c, x, u),
            Multilinear::Enumerated(f) => {
                let mut hi = x.clone();
                hi.set(u, 1.0)?;
                let mut lo = x.clone();
                lo.set(u, 0.0)?;
                Ok(enumerate_f(*f, &hi)? - enumerate_f(*f, &lo)?)
            }
            Multilinear::Sampled(f, cfg) => estimate_partial(*f, x, u, cfg),
        }
    }
}
