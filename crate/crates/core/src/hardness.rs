//! Layered adversarial objectives built from bipartite graphs.
//!
//! Layer `i` holds `n` parallel copies `(e, j)` of every edge `e` of a graph
//! `G_i`. With `s(i) = |S ∩ N_i| / m_i` and `s(i,¬o_i)` the same count
//! restricted to copies `j ≠ o_i`, the value is folded from the last layer up:
//!
//! ```text
//! f_i(S) = min{ p+1-i, s(i) + (1 - s(i,¬o_i)/(p+1-i)) · f_{i+1}(S) },   f_{p+1} = 0.
//! ```
//!
//! Copies at the secret indices `o_i` cover mass of every later layer, all
//! other copies only of their own. The value depends on `S` only through two
//! counters per layer.

use crate::error::{Error, Result};
use crate::matroid::{validate_set, ElementId, PartitionMatroid};
use crate::objective::SubmodularFn;
use crate::rng::CounterRng;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

/// One bipartite graph `G_i` with its matching bound `m_i`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    /// Edges `(left, right)`; the two sides are separate vertex sets.
    pub edges: Vec<(usize, usize)>,
    pub matching_bound: f64,
}

/// A member of the family, flattened onto element ids: layer `i` occupies
/// ids `offset_i .. offset_i + |E_i| n`, with `(e, j) ↦ offset_i + e n + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredInstance {
    copies: usize,
    layers: Vec<Layer>,
    /// Secret copy index per layer, `0..copies`.
    secrets: Vec<usize>,
    offsets: Vec<usize>,
    ground: usize,
}

/// Decoded element id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayeredElement {
    /// Zero-based layer.
    pub layer: usize,
    pub edge: usize,
    pub copy: usize,
}

impl LayeredInstance {
    pub fn new(copies: usize, layers: Vec<Layer>, secrets: Vec<usize>) -> Result<Self> {
        if copies == 0 {
            return Err(Error::Input("at least one copy per edge is needed".into()));
        }
        if layers.is_empty() {
            return Err(Error::Input("at least one layer is needed".into()));
        }
        if secrets.len() != layers.len() {
            return Err(Error::Input(format!(
                "{} secret indices for {} layers",
                secrets.len(),
                layers.len()
            )));
        }
        if let Some(&o) = secrets.iter().find(|&&o| o >= copies) {
            return Err(Error::Input(format!("secret index {o} is not below {copies}")));
        }
        let mut offsets = Vec::with_capacity(layers.len());
        let mut ground = 0;
        for (i, layer) in layers.iter().enumerate() {
            let matching = max_matching(&layer.edges);
            if !(layer.matching_bound.is_finite() && layer.matching_bound > 0.0)
                || layer.matching_bound < matching as f64
            {
                return Err(Error::Input(format!(
                    "layer {i}: bound {} is below the maximum matching size {matching}",
                    layer.matching_bound
                )));
            }
            offsets.push(ground);
            ground += layer.edges.len() * copies;
        }
        Ok(LayeredInstance { copies, layers, secrets, offsets, ground })
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn secrets(&self) -> &[usize] {
        &self.secrets
    }

    /// The same graphs with different secret indices.
    pub fn with_secrets(&self, secrets: Vec<usize>) -> Result<Self> {
        LayeredInstance::new(self.copies, self.layers.clone(), secrets)
    }

    pub fn layer_range(&self, layer: usize) -> std::ops::Range<ElementId> {
        let start = self.offsets[layer];
        start..start + self.layers[layer].edges.len() * self.copies
    }

    pub fn element(&self, layer: usize, edge: usize, copy: usize) -> Result<ElementId> {
        if layer >= self.layers.len() || edge >= self.layers[layer].edges.len() || copy >= self.copies {
            return Err(Error::Input(format!("no element (layer {layer}, edge {edge}, copy {copy})")));
        }
        Ok(self.offsets[layer] + edge * self.copies + copy)
    }

    pub fn decode(&self, id: ElementId) -> Result<LayeredElement> {
        if id >= self.ground {
            return Err(Error::OutOfRange { id, ground: self.ground });
        }
        let layer = self.offsets.partition_point(|&o| o <= id) - 1;
        let local = id - self.offsets[layer];
        Ok(LayeredElement { layer, edge: local / self.copies, copy: local % self.copies })
    }

    /// `(|S ∩ N_i|, |{(e,j) ∈ S ∩ N_i : j ≠ o_i}|)` per layer.
    pub fn counters(&self, set: &[ElementId]) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); self.layers.len()];
        for &id in set {
            let layer = self.offsets.partition_point(|&o| o <= id) - 1;
            let copy = (id - self.offsets[layer]) % self.copies;
            counts[layer].0 += 1;
            if copy != self.secrets[layer] {
                counts[layer].1 += 1;
            }
        }
        counts
    }

    /// The value from the per-layer counters.
    pub fn value_from_counters(&self, counts: &[(usize, usize)]) -> f64 {
        let p = self.layers.len();
        let mut next = 0.0;
        for i in (0..p).rev() {
            let m_i = self.layers[i].matching_bound;
            let cap = (p - i) as f64;
            let s = counts[i].0 as f64 / m_i;
            let s_off = counts[i].1 as f64 / m_i;
            next = cap.min(s + (1.0 - s_off / cap) * next);
        }
        next
    }

    /// Partition matroid with one block per layer whose capacity is the
    /// layer's maximum matching size.
    pub fn layer_matroid(&self) -> Result<PartitionMatroid> {
        let mut blocks = Vec::with_capacity(self.ground);
        let mut caps = Vec::with_capacity(self.layers.len());
        for (i, layer) in self.layers.iter().enumerate() {
            blocks.extend(std::iter::repeat_n(i, layer.edges.len() * self.copies));
            caps.push(max_matching(&layer.edges).max(1));
        }
        PartitionMatroid::new(blocks, caps)
    }
}

impl SubmodularFn for LayeredInstance {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        self.value_from_counters(&self.counters(set))
    }
}

/// Maximum bipartite matching by augmenting paths. Returns the matched pairs
/// as edge indices.
pub fn max_matching_edges(edges: &[(usize, usize)]) -> Vec<usize> {
    let left = edges.iter().map(|e| e.0 + 1).max().unwrap_or(0);
    let right = edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    let mut adjacency = vec![Vec::new(); left];
    for (k, &(a, _)) in edges.iter().enumerate() {
        adjacency[a].push(k);
    }
    let mut matched_right: Vec<Option<usize>> = vec![None; right];

    fn augment(
        a: usize,
        edges: &[(usize, usize)],
        adjacency: &[Vec<usize>],
        matched_right: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &k in &adjacency[a] {
            let b = edges[k].1;
            if seen[b] {
                continue;
            }
            seen[b] = true;
            let free = match matched_right[b] {
                None => true,
                Some(other) => augment(edges[other].0, edges, adjacency, matched_right, seen),
            };
            if free {
                matched_right[b] = Some(k);
                return true;
            }
        }
        false
    }

    for a in 0..left {
        let mut seen = vec![false; right];
        augment(a, edges, &adjacency, &mut matched_right, &mut seen);
    }
    let mut out: Vec<usize> = matched_right.into_iter().flatten().collect();
    out.sort_unstable();
    out
}

pub fn max_matching(edges: &[(usize, usize)]) -> usize {
    max_matching_edges(edges).len()
}

/// Smallest power of `1 + ε` that is at least `matching` (the exact size for
/// `ε = 0`; one for an empty matching).
pub fn power_bound(matching: usize, epsilon: f64) -> f64 {
    let target = matching.max(1) as f64;
    if epsilon <= 0.0 {
        return target;
    }
    let base = 1.0 + epsilon;
    let mut k = (target.ln() / base.ln()).ceil() as i32;
    while k > 0 && base.powi(k - 1) >= target {
        k -= 1;
    }
    while base.powi(k) < target {
        k += 1;
    }
    base.powi(k)
}

/// Outcome of [`verify_family_properties`]; `violations` is empty when every
/// check passed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropertyReport {
    pub agreement_checks: usize,
    pub yes_value: f64,
    pub yes_threshold: f64,
    pub no_checks: usize,
    pub no_max_value: f64,
    pub no_threshold: f64,
    pub violations: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural properties of the family on `inst`, whose matching
/// bounds must be powers of `1 + epsilon` per [`power_bound`]:
///
/// * functions sharing `o_1..o_{i-1}` agree exactly on subsets of `N_{≤i}`;
/// * the matched copies at the secret indices are worth at least `p/(1+ε)`;
/// * sets avoiding the secret copies with `|S ∩ N_i| ≤ α m_i` are worth
///   strictly less than `1 + αp/(α+1)`.
pub fn verify_family_properties(
    inst: &LayeredInstance,
    epsilon: f64,
    alpha: f64,
    trials: usize,
    seed: u64,
) -> Result<PropertyReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let p = inst.layer_count();
    let n = inst.copies();
    let mut rng = CounterRng::new(seed);
    let mut report = PropertyReport::default();

    for i in 0..p {
        let prefix: Vec<ElementId> = (0..inst.layer_range(i).end).collect();
        for _ in 0..trials {
            let secrets: Vec<usize> = (0..p)
                .map(|j| if j < i { inst.secrets()[j] } else { rng.random_range(0..n) })
                .collect();
            let other = inst.with_secrets(secrets)?;
            let set: Vec<ElementId> = prefix.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            let (a, b) = (inst.eval(&set), other.eval(&set));
            report.agreement_checks += 1;
            if a.to_bits() != b.to_bits() {
                report.violations.push(format!(
                    "layer {}: secrets {:?} and {:?} disagree on {set:?} ({a} vs {b})",
                    i + 1,
                    inst.secrets(),
                    other.secrets()
                ));
            }
        }
    }

    let mut yes = Vec::new();
    for (i, layer) in inst.layers().iter().enumerate() {
        for e in max_matching_edges(&layer.edges) {
            yes.push(inst.element(i, e, inst.secrets()[i])?);
        }
    }
    report.yes_value = inst.eval(&yes);
    report.yes_threshold = p as f64 / (1.0 + epsilon);
    if report.yes_value < report.yes_threshold - 1e-9 {
        report.violations.push(format!(
            "matched secret copies are worth {} < {}",
            report.yes_value, report.yes_threshold
        ));
    }

    report.no_threshold = 1.0 + alpha * p as f64 / (alpha + 1.0);
    let pools: Vec<Vec<ElementId>> = (0..p)
        .map(|i| {
            inst.layer_range(i)
                .filter(|&id| inst.decode(id).map(|d| d.copy != inst.secrets()[i]).unwrap_or(false))
                .collect()
        })
        .collect();
    for _ in 0..trials {
        let mut set = Vec::new();
        for (i, pool) in pools.iter().enumerate() {
            let limit = ((alpha * inst.layers()[i].matching_bound).floor() as usize).min(pool.len());
            // Favor the largest allowed sets: they are the adversarial ones.
            let take = if rng.random_bool(0.5) { limit } else { rng.random_range(0..=limit) };
            set.extend(pool.choose_multiple(&mut rng, take).copied());
        }
        let v = inst.eval(&set);
        report.no_checks += 1;
        report.no_max_value = report.no_max_value.max(v);
        if v >= report.no_threshold {
            report.violations.push(format!("set {set:?} avoiding the secrets is worth {v}"));
        }
    }
    Ok(report)
}

/// Every member of the family for the given graphs (`n^p` secret vectors).
pub fn all_secret_vectors(layers: usize, copies: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..layers {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..copies).map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }
    out
}

/// Path graph with `edges` edges, as a bipartite graph.
pub fn path_graph(edges: usize) -> Vec<(usize, usize)> {
    // Vertices alternate sides: left k is path vertex 2k, right k is 2k+1.
    (0..edges).map(|k| (k.div_ceil(2), k / 2)).collect()
}

/// Random bipartite graph with the given side sizes and edge probability.
pub fn random_bipartite(left: usize, right: usize, density: f64, rng: &mut CounterRng) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for a in 0..left {
        for b in 0..right {
            if rng.random_bool(density) {
                edges.push((a, b));
            }
        }
    }
    if edges.is_empty() && left > 0 && right > 0 {
        edges.push((0, 0));
    }
    edges.shuffle(rng);
    edges
}

/// Validates `set` against the instance's ground set.
pub fn validate_layered_set(inst: &LayeredInstance, set: &[ElementId]) -> Result<()> {
    validate_set(inst.ground_size(), set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::find_submodularity_violation;

    fn exact_layers(graphs: Vec<Vec<(usize, usize)>>) -> Vec<Layer> {
        graphs
            .into_iter()
            .map(|edges| {
                let bound = power_bound(max_matching(&edges), 0.0);
                Layer { edges, matching_bound: bound }
            })
            .collect()
    }

    #[test]
    fn value_examples() {
        let one = LayeredInstance::new(1, vec![Layer { edges: vec![(0, 0), (0, 1)], matching_bound: 2.0 }], vec![0])
            .unwrap();
        assert_eq!(one.eval(&[]), 0.0);
        assert_eq!(one.eval(&[one.element(0, 1, 0).unwrap()]), 0.5);

        let layers = vec![
            Layer { edges: vec![(0, 0), (1, 1)], matching_bound: 2.0 },
            Layer { edges: vec![(0, 0), (1, 1)], matching_bound: 2.0 },
        ];
        let two = LayeredInstance::new(2, layers, vec![0, 0]).unwrap();
        let u = two.element(0, 0, 1).unwrap();
        assert_eq!(two.eval(&[u]), 0.5);
    }

    #[test]
    fn element_ids_round_trip() {
        let inst = LayeredInstance::new(3, exact_layers(vec![path_graph(2), path_graph(3)]), vec![1, 2]).unwrap();
        assert_eq!(inst.ground_size(), 15);
        for id in 0..15 {
            let d = inst.decode(id).unwrap();
            assert_eq!(inst.element(d.layer, d.edge, d.copy).unwrap(), id);
        }
        assert!(inst.decode(15).is_err());
        assert!(inst.element(0, 2, 0).is_err());
    }

    #[test]
    fn invalid_instances_rejected() {
        assert!(LayeredInstance::new(2, exact_layers(vec![path_graph(2)]), vec![2]).is_err());
        assert!(LayeredInstance::new(2, exact_layers(vec![path_graph(2)]), vec![0, 0]).is_err());
        let low = vec![Layer { edges: path_graph(3), matching_bound: 1.0 }];
        assert!(LayeredInstance::new(2, low, vec![0]).is_err());
    }

    #[test]
    fn matching_and_power_bound() {
        assert_eq!(max_matching(&path_graph(1)), 1);
        assert_eq!(max_matching(&path_graph(3)), 2);
        assert_eq!(max_matching(&path_graph(4)), 2);
        assert_eq!(max_matching(&[(0, 0), (1, 0), (2, 0)]), 1);
        assert_eq!(max_matching(&[(0, 0), (0, 1), (1, 0)]), 2);
        assert_eq!(power_bound(3, 0.0), 3.0);
        let b = power_bound(3, 0.5);
        assert_eq!(b, 1.5f64.powi(3));
        assert_eq!(power_bound(1, 0.5), 1.0);
    }

    #[test]
    fn exact_bounds_give_value_p_on_yes_sets() {
        let inst = LayeredInstance::new(3, exact_layers(vec![path_graph(2), path_graph(3), path_graph(1)]), vec![2, 0, 1])
            .unwrap();
        let report = verify_family_properties(&inst, 0.0, 0.5, 200, 1).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.yes_value >= 3.0 - 1e-12);
    }

    #[test]
    fn properties_hold_for_paths() {
        let inst = LayeredInstance::new(3, exact_layers(vec![path_graph(2), path_graph(2)]), vec![1, 0]).unwrap();
        let report = verify_family_properties(&inst, 0.0, 0.5, 500, 7).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn monotone_submodular_and_counter_driven() {
        let inst = LayeredInstance::new(2, exact_layers(vec![path_graph(2), path_graph(3)]), vec![1, 0]).unwrap();
        assert_eq!(inst.ground_size(), 10);
        assert_eq!(find_submodularity_violation(&inst, 1e-9), None);
        let a = [0, 3, 5, 8];
        let b = [1, 2, 4, 7];
        assert_eq!(inst.counters(&a), inst.counters(&b));
        assert_eq!(inst.eval(&a).to_bits(), inst.eval(&b).to_bits());
    }

    #[test]
    fn secret_vectors_enumerated() {
        let all = all_secret_vectors(3, 2);
        assert_eq!(all.len(), 8);
        assert!(all.contains(&vec![1, 0, 1]));
    }
}
