//! Random instance generators. All randomness comes from the given
//! [`CounterRng`].

use rand::Rng;

use crate::error::{Error, Result};
use crate::hardness::{max_matching, path_graph, power_bound, random_bipartite, Layer};
use crate::harness::instance::{InstanceFile, MatroidSpec, ObjectiveSpec, SCHEMA_VERSION};
use crate::rng::CounterRng;

/// Weighted coverage: `universe` points with weights in `[0.5, 2)`, each of
/// the `n` elements covering each point with probability `density`.
pub fn coverage(n: usize, universe: usize, density: f64, rng: &mut CounterRng) -> ObjectiveSpec {
    let sets = (0..n).map(|_| (0..universe).filter(|_| rng.random_bool(density)).collect()).collect();
    let weights = (0..universe).map(|_| rng.random_range(0.5..2.0)).collect();
    ObjectiveSpec::Coverage { sets, weights }
}

/// Undirected cut on `n` vertices; every pair is an edge with probability
/// `density`, weights in `[0.5, 2)`.
pub fn cut(n: usize, density: f64, rng: &mut CounterRng) -> ObjectiveSpec {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(density) {
                edges.push((a, b, rng.random_range(0.5..2.0)));
            }
        }
    }
    ObjectiveSpec::Cut { vertices: n, edges }
}

/// Partition matroid with `parts` non-empty blocks and capacities in
/// `1..=max_capacity` (never above the block size).
pub fn partition(n: usize, parts: usize, max_capacity: usize, rng: &mut CounterRng) -> MatroidSpec {
    let parts = parts.clamp(1, n.max(1));
    let mut blocks: Vec<usize> = (0..n).map(|e| if e < parts { e } else { rng.random_range(0..parts) }).collect();
    rand::seq::SliceRandom::shuffle(blocks.as_mut_slice(), rng);
    let capacities = (0..parts)
        .map(|b| {
            let size = blocks.iter().filter(|&&x| x == b).count().max(1);
            rng.random_range(1..=max_capacity.max(1)).min(size)
        })
        .collect();
    MatroidSpec::Partition { blocks, capacities }
}

/// Graphic matroid with `n` edges between distinct random endpoints.
pub fn graphic(n: usize, vertices: usize, rng: &mut CounterRng) -> Result<MatroidSpec> {
    if vertices < 2 {
        return Err(Error::Config("a graphic matroid needs at least two vertices".into()));
    }
    let edges = (0..n)
        .map(|_| {
            let a = rng.random_range(0..vertices);
            let b = (a + rng.random_range(1..vertices)) % vertices;
            (a, b)
        })
        .collect();
    Ok(MatroidSpec::Graphic { vertices, edges })
}

pub fn file(name: String, seed: u64, ground_size: usize, matroid: MatroidSpec, objective: ObjectiveSpec) -> InstanceFile {
    InstanceFile { schema: SCHEMA_VERSION, name: Some(name), seed: Some(seed), ground_size, matroid, objective }
}

/// Coverage objective over a partition matroid of rank at most 5 with
/// `min_n..=max_n` elements, as used by the guarantee checks.
pub fn small_coverage_instance(seed: u64, min_n: usize, max_n: usize) -> InstanceFile {
    let mut rng = CounterRng::new(seed);
    let n = rng.random_range(min_n..=max_n);
    let parts = rng.random_range(1..=3);
    let mut matroid = partition(n, parts, 3, &mut rng);
    if let MatroidSpec::Partition { capacities, .. } = &mut matroid {
        while capacities.iter().sum::<usize>() > 5 {
            let k = capacities.iter().enumerate().max_by_key(|(_, &c)| c).map(|(k, _)| k).unwrap_or(0);
            capacities[k] -= 1;
        }
    }
    let universe = rng.random_range(n..=2 * n);
    let density = rng.random_range(0.1..0.4);
    let objective = coverage(n, universe, density, &mut rng);
    file(format!("coverage-{seed}"), seed, n, matroid, objective)
}

/// Cut objective over a uniform or partition matroid with `min_n..=max_n`
/// vertices.
pub fn small_cut_instance(seed: u64, min_n: usize, max_n: usize) -> InstanceFile {
    let mut rng = CounterRng::new(seed);
    let n = rng.random_range(min_n..=max_n);
    let matroid = if rng.random_bool(0.5) {
        MatroidSpec::Uniform { capacity: rng.random_range(1..=(n / 2).max(1)) }
    } else {
        partition(n, rng.random_range(1..=3), 3, &mut rng)
    };
    let objective = cut(n, rng.random_range(0.2..0.6), &mut rng);
    file(format!("cut-{seed}"), seed, n, matroid, objective)
}

/// Per-layer graphs from a spec: `path:E1,E2,..` (paths with the given edge
/// counts) or `random:LEFT:RIGHT:DENSITY` (the same shape for every layer).
pub fn parse_graphs(spec: &str, layers: usize, rng: &mut CounterRng) -> Result<Vec<Vec<(usize, usize)>>> {
    if let Some(rest) = spec.strip_prefix("path:") {
        let counts: Vec<usize> = rest
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Input(format!("bad edge count `{t}`"))))
            .collect::<Result<_>>()?;
        if counts.len() != layers && counts.len() != 1 {
            return Err(Error::Input(format!("{} path lengths for {layers} layers", counts.len())));
        }
        return Ok((0..layers).map(|i| path_graph(counts[i.min(counts.len() - 1)].max(1))).collect());
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [l, r, d] = parts.as_slice() else {
            return Err(Error::Input(format!("expected random:LEFT:RIGHT:DENSITY, got `{spec}`")));
        };
        let left: usize = l.parse().map_err(|_| Error::Input(format!("bad left size `{l}`")))?;
        let right: usize = r.parse().map_err(|_| Error::Input(format!("bad right size `{r}`")))?;
        let density: f64 = d.parse().map_err(|_| Error::Input(format!("bad density `{d}`")))?;
        if !(0.0..=1.0).contains(&density) || left == 0 || right == 0 {
            return Err(Error::Input(format!("invalid random graph spec `{spec}`")));
        }
        return Ok((0..layers).map(|_| random_bipartite(left, right, density, rng)).collect());
    }
    Err(Error::Input(format!("unknown graph spec `{spec}`")))
}

/// Layered hard instance over the given graphs, with matching bounds
/// `power_bound(matching, epsilon)`, random secrets, and a partition matroid
/// allowing one matching's worth of elements per layer.
pub fn hardness(
    copies: usize,
    graphs: Vec<Vec<(usize, usize)>>,
    epsilon: f64,
    seed: u64,
    rng: &mut CounterRng,
) -> Result<InstanceFile> {
    if copies == 0 || graphs.is_empty() {
        return Err(Error::Input("need at least one layer and one copy".into()));
    }
    let secrets: Vec<usize> = graphs.iter().map(|_| rng.random_range(0..copies)).collect();
    let layers: Vec<Layer> = graphs
        .into_iter()
        .map(|edges| {
            let bound = power_bound(max_matching(&edges), epsilon);
            Layer { edges, matching_bound: bound }
        })
        .collect();
    let mut blocks = Vec::new();
    let mut capacities = Vec::new();
    for (i, layer) in layers.iter().enumerate() {
        blocks.extend(std::iter::repeat_n(i, layer.edges.len() * copies));
        capacities.push(max_matching(&layer.edges).max(1));
    }
    let n = blocks.len();
    let p = layers.len();
    Ok(file(
        format!("hardness-p{p}-n{copies}"),
        seed,
        n,
        MatroidSpec::Partition { blocks, capacities },
        ObjectiveSpec::HardnessFamily { copies, layers, secrets },
    ))
}
