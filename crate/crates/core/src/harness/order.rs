//! Stream orders.

use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::harness::instance::parse_id_list;
use crate::local_search::validate_permutation;
use crate::matroid::ElementId;
use crate::objective::SubmodularFn;
use crate::rng::CounterRng;

/// How the ground set is ordered into a stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamOrder {
    Explicit(Vec<ElementId>),
    /// Uniformly random permutation from the seed.
    Random(u64),
    IdAscending,
    IdDescending,
    /// Largest singleton value first, ties by increasing id.
    SingletonDescending,
}

impl StreamOrder {
    /// Parses `random:SEED`, `id-asc`, `id-desc`, `singleton-desc`, or a path
    /// to a file listing the permutation.
    pub fn parse(spec: &str) -> Result<Self> {
        if let Ok(order) = spec.parse() {
            return Ok(order);
        }
        let text = std::fs::read_to_string(Path::new(spec))
            .map_err(|e| Error::Input(format!("order `{spec}` is neither a generator nor a readable file: {e}")))?;
        Ok(StreamOrder::Explicit(parse_id_list(&text)?))
    }

    pub fn resolve<F: SubmodularFn + ?Sized>(&self, f: &F) -> Result<Vec<ElementId>> {
        let n = f.ground_size();
        let order = match self {
            StreamOrder::Explicit(ids) => ids.clone(),
            StreamOrder::Random(seed) => {
                let mut ids: Vec<ElementId> = (0..n).collect();
                ids.shuffle(&mut CounterRng::new(*seed));
                ids
            }
            StreamOrder::IdAscending => (0..n).collect(),
            StreamOrder::IdDescending => (0..n).rev().collect(),
            StreamOrder::SingletonDescending => {
                let values: Vec<f64> = (0..n).map(|u| f.eval(&[u])).collect();
                let mut ids: Vec<ElementId> = (0..n).collect();
                ids.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
                ids
            }
        };
        validate_permutation(n, &order)?;
        Ok(order)
    }
}

impl FromStr for StreamOrder {
    type Err = Error;

    /// Generator specs only; see [`StreamOrder::parse`] for files.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "id-asc" => Ok(StreamOrder::IdAscending),
            "id-desc" => Ok(StreamOrder::IdDescending),
            "singleton-desc" => Ok(StreamOrder::SingletonDescending),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(StreamOrder::Random)
                    .map_err(|_| Error::Input(format!("bad seed in `{s}`"))),
                None => Err(Error::Input(format!("unknown order `{s}`"))),
            },
        }
    }
}

impl std::fmt::Display for StreamOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StreamOrder::Explicit(ids) => write!(f, "explicit({})", ids.len()),
            StreamOrder::Random(seed) => write!(f, "random:{seed}"),
            StreamOrder::IdAscending => write!(f, "id-asc"),
            StreamOrder::IdDescending => write!(f, "id-desc"),
            StreamOrder::SingletonDescending => write!(f, "singleton-desc"),
        }
    }
}
