//! Instance files (JSON, `"schema": 1`).
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "tiny",
//!   "ground_size": 3,
//!   "matroid": { "type": "uniform", "capacity": 2 },
//!   "objective": { "type": "coverage", "sets": [[0], [0, 1], [2]], "weights": [1.0, 2.0, 0.5] }
//! }
//! ```
//!
//! Matroid types: `uniform {capacity}`, `partition {blocks, capacities}`,
//! `graphic {vertices, edges}`. Objective types: `coverage {sets, weights}`,
//! `cut {vertices, edges: [[a, b, w], ..]}`, `hardness-family {copies, layers,
//! secrets}`. Unknown fields are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardness::{Layer, LayeredInstance};
use crate::matroid::{ElementId, GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid};
use crate::multilinear::{EstimatorConfig, Multilinear};
use crate::objective::{CoverageFunction, CutFunction, SubmodularFn};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub ground_size: usize,
    pub matroid: MatroidSpec,
    pub objective: ObjectiveSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform { capacity: usize },
    Partition { blocks: Vec<usize>, capacities: Vec<usize> },
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    Coverage { sets: Vec<Vec<usize>>, weights: Vec<f64> },
    Cut { vertices: usize, edges: Vec<(usize, usize, f64)> },
    HardnessFamily { copies: usize, layers: Vec<Layer>, secrets: Vec<usize> },
}

impl MatroidSpec {
    /// Builds the matroid; `ground_size` is only used by the uniform type.
    pub fn build(&self, ground_size: usize) -> Result<AnyMatroid> {
        Ok(match self {
            MatroidSpec::Uniform { capacity } => AnyMatroid::Uniform(UniformMatroid::new(ground_size, *capacity)?),
            MatroidSpec::Partition { blocks, capacities } => {
                AnyMatroid::Partition(PartitionMatroid::new(blocks.clone(), capacities.clone())?)
            }
            MatroidSpec::Graphic { vertices, edges } => {
                AnyMatroid::Graphic(GraphicMatroid::new(*vertices, edges.clone())?)
            }
        })
    }
}

/// A matroid built from a [`MatroidSpec`].
#[derive(Debug, Clone)]
pub enum AnyMatroid {
    Uniform(UniformMatroid),
    Partition(PartitionMatroid),
    Graphic(GraphicMatroid),
}

impl Matroid for AnyMatroid {
    fn ground_size(&self) -> usize {
        match self {
            AnyMatroid::Uniform(m) => m.ground_size(),
            AnyMatroid::Partition(m) => m.ground_size(),
            AnyMatroid::Graphic(m) => m.ground_size(),
        }
    }

    fn independent(&self, set: &[ElementId]) -> bool {
        match self {
            AnyMatroid::Uniform(m) => m.independent(set),
            AnyMatroid::Partition(m) => m.independent(set),
            AnyMatroid::Graphic(m) => m.independent(set),
        }
    }

    fn rank_total(&self) -> usize {
        match self {
            AnyMatroid::Uniform(m) => m.rank_total(),
            AnyMatroid::Partition(m) => m.rank_total(),
            AnyMatroid::Graphic(m) => m.rank_total(),
        }
    }
}

/// An objective built from an [`ObjectiveSpec`].
#[derive(Debug, Clone)]
pub enum AnyObjective {
    Coverage(CoverageFunction),
    Cut(CutFunction),
    Hardness(LayeredInstance),
}

impl AnyObjective {
    pub fn as_dyn(&self) -> &dyn SubmodularFn {
        match self {
            AnyObjective::Coverage(f) => f,
            AnyObjective::Cut(f) => f,
            AnyObjective::Hardness(f) => f,
        }
    }

    pub fn coverage(&self) -> Option<&CoverageFunction> {
        match self {
            AnyObjective::Coverage(f) => Some(f),
            _ => None,
        }
    }
}

/// A parsed and validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub file: InstanceFile,
    pub matroid: AnyMatroid,
    pub objective: AnyObjective,
}

impl Instance {
    pub fn from_file(file: InstanceFile) -> Result<Self> {
        if file.schema != SCHEMA_VERSION {
            return Err(Error::Input(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                file.schema
            )));
        }
        let n = file.ground_size;
        let matroid = file.matroid.build(n)?;
        let objective = match &file.objective {
            ObjectiveSpec::Coverage { sets, weights } => {
                AnyObjective::Coverage(CoverageFunction::new(sets.clone(), weights.clone())?)
            }
            ObjectiveSpec::Cut { vertices, edges } => AnyObjective::Cut(CutFunction::new(*vertices, edges.clone())?),
            ObjectiveSpec::HardnessFamily { copies, layers, secrets } => {
                AnyObjective::Hardness(LayeredInstance::new(*copies, layers.clone(), secrets.clone())?)
            }
        };
        if matroid.ground_size() != n || objective.as_dyn().ground_size() != n {
            return Err(Error::Input(format!(
                "ground_size {n}, but the matroid has {} elements and the objective {}",
                matroid.ground_size(),
                objective.as_dyn().ground_size()
            )));
        }
        Ok(Instance { file, matroid, objective })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn ground_size(&self) -> usize {
        self.file.ground_size
    }

    pub fn name(&self) -> &str {
        self.file.name.as_deref().unwrap_or("")
    }

    pub fn f(&self) -> &dyn SubmodularFn {
        self.objective.as_dyn()
    }

    /// The closed-form oracle when `exact` (coverage objectives only),
    /// otherwise Monte-Carlo sampling.
    pub fn oracle(&self, exact: bool, estimator: EstimatorConfig) -> Result<Multilinear<'_>> {
        if exact {
            let cov = self
                .objective
                .coverage()
                .ok_or_else(|| Error::Config("the exact oracle needs a coverage objective".into()))?;
            Ok(Multilinear::Coverage(cov))
        } else {
            Ok(Multilinear::Sampled(self.f(), estimator))
        }
    }
}

/// Writes `file` as pretty JSON.
pub fn save(file: &InstanceFile, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(file)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Reads a list of element ids: either a JSON array or whitespace/comma
/// separated integers.
pub fn parse_id_list(text: &str) -> Result<Vec<ElementId>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    trimmed
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Input(format!("`{t}` is not an element id"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
        "schema": 1,
        "name": "tiny",
        "ground_size": 3,
        "matroid": { "type": "uniform", "capacity": 2 },
        "objective": { "type": "coverage", "sets": [[0], [0, 1], [2]], "weights": [1.0, 2.0, 0.5] }
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let inst = Instance::from_json(TINY).unwrap();
        assert_eq!(inst.ground_size(), 3);
        assert_eq!(inst.name(), "tiny");
        assert_eq!(inst.f().value(&[1, 2]).unwrap(), 3.5);
        assert_eq!(inst.matroid.rank_total(), 2);
        let text = serde_json::to_string(&inst.file).unwrap();
        let again = Instance::from_json(&text).unwrap();
        assert_eq!(again.file, inst.file);
    }

    #[test]
    fn rejects_bad_files() {
        let unknown = TINY.replace("\"name\"", "\"colour\": 1, \"name\"");
        assert!(Instance::from_json(&unknown).is_err());
        let schema = TINY.replace("\"schema\": 1", "\"schema\": 2");
        assert!(Instance::from_json(&schema).is_err());
        let size = TINY.replace("\"ground_size\": 3", "\"ground_size\": 4");
        assert!(Instance::from_json(&size).is_err());
        let matroid_field = TINY.replace("\"capacity\": 2", "\"capacity\": 2, \"rank\": 2");
        assert!(Instance::from_json(&matroid_field).is_err());
    }

    #[test]
    fn other_types_parse() {
        let text = r#"{
            "schema": 1, "ground_size": 3,
            "matroid": { "type": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]] },
            "objective": { "type": "cut", "vertices": 3, "edges": [[0, 1, 1.0], [1, 2, 2.0]] }
        }"#;
        let inst = Instance::from_json(text).unwrap();
        assert!(!inst.f().is_monotone());
        assert!(inst.oracle(true, EstimatorConfig::default()).is_err());
        let text = r#"{
            "schema": 1, "ground_size": 4,
            "matroid": { "type": "partition", "blocks": [0, 0, 1, 1], "capacities": [1, 1] },
            "objective": { "type": "hardness-family", "copies": 2,
                "layers": [ { "edges": [[0, 0]], "matching_bound": 1.0 }, { "edges": [[0, 0]], "matching_bound": 1.0 } ],
                "secrets": [0, 1] }
        }"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.f().value(&[0, 3]).unwrap(), 2.0);
    }

    #[test]
    fn id_lists() {
        assert_eq!(parse_id_list("[3, 1, 2]").unwrap(), vec![3, 1, 2]);
        assert_eq!(parse_id_list("3 1\n2,0").unwrap(), vec![3, 1, 2, 0]);
        assert!(parse_id_list("a b").is_err());
    }
}
