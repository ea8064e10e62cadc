//! JSON instance files.
//!
//! Every file is an object with `schema_version` and a `kind` tag. Loading
//! validates all type invariants; errors name the offending JSON path.

use std::path::Path;

use covlab_core::covering::{Covering, GroundSet};
use covlab_core::dynamics::DynamicalInstance;
use covlab_core::guards::Guards;
use covlab_core::metric::{MetricSpace, RadiusGrid};
use covlab_core::perm::Perm;
use covlab_core::rational::{format_rational, parse_rational};
use covlab_core::symbolic::SubshiftSpec;
use covlab_core::{Rational, UniformStructure};
use num_bigint::BigUint;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

pub type Lists = Vec<Vec<usize>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringSystemFile {
    pub schema_version: u32,
    pub kind: String,
    pub ground: usize,
    pub bases: Vec<Lists>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicalFile {
    pub schema_version: u32,
    pub kind: String,
    pub ground: usize,
    pub bases: Vec<Lists>,
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Preset {
    Cantor {
        level: u32,
    },
    Circle {
        points: usize,
        circumference: String,
    },
}

/// Radii `base^{-from}, …, base^{-to}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub base: i64,
    pub from: u32,
    pub to: u32,
}

impl GridSpec {
    pub fn parse(text: &str) -> CliResult<GridSpec> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || CliError::usage(format!("invalid grid `{text}`: expected BASE:FROM:TO"));
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(GridSpec {
            base: parts[0].trim().parse().map_err(|_| bad())?,
            from: parts[1].trim().parse().map_err(|_| bad())?,
            to: parts[2].trim().parse().map_err(|_| bad())?,
        })
    }

    pub fn grid(&self) -> CliResult<RadiusGrid> {
        Ok(RadiusGrid::powers(self.base, self.from, self.to)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    pub schema_version: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<Lists>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A word count, as a JSON integer or a decimal string for big values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Count {
    Int(u64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubshiftFile {
    pub schema_version: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<u8>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Count>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A validated instance together with the file it was read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    CoveringSystem {
        file: CoveringSystemFile,
        structure: UniformStructure,
    },
    Dynamical {
        file: DynamicalFile,
        instance: DynamicalInstance,
    },
    Metric {
        file: MetricFile,
        space: MetricSpace,
        generators: Vec<Perm>,
        cover: Option<Covering>,
    },
    Subshift {
        file: SubshiftFile,
        spec: SubshiftSpec,
    },
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::CoveringSystem { .. } => "covering_system",
            Instance::Dynamical { .. } => "dynamical",
            Instance::Metric { .. } => "metric",
            Instance::Subshift { .. } => "subshift",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Instance::CoveringSystem { file, .. } => file.seed,
            Instance::Dynamical { file, .. } => file.seed,
            Instance::Metric { file, .. } => file.seed,
            Instance::Subshift { file, .. } => file.seed,
        }
    }

    pub fn to_json(&self) -> String {
        let value = match self {
            Instance::CoveringSystem { file, .. } => serde_json::to_value(file),
            Instance::Dynamical { file, .. } => serde_json::to_value(file),
            Instance::Metric { file, .. } => serde_json::to_value(file),
            Instance::Subshift { file, .. } => serde_json::to_value(file),
        }
        .expect("instance files serialise");
        let mut text = serde_json::to_string_pretty(&value).expect("json value serialises");
        text.push('\n');
        text
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_json())
            .map_err(|e| CliError::failure(format!("cannot write {}: {e}", path.display())))
    }
}

pub fn load(path: &Path, guards: &Guards) -> CliResult<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::failure(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, guards)
}

fn typed<T: DeserializeOwned>(value: serde_json::Value) -> CliResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::failure(format!("schema error at `{path}`: {}", e.into_inner()))
    })
}

/// Parses and validates an instance document.
pub fn parse(text: &str, guards: &Guards) -> CliResult<Instance> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::failure(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::failure("schema error at `.`: expected an object"))?;
    match obj.get("schema_version") {
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION as u64) => {}
        Some(v) => {
            return Err(CliError::failure(format!(
            "schema error at `schema_version`: unsupported version {v}, expected {SCHEMA_VERSION}"
        )))
        }
        None => {
            return Err(CliError::failure(
                "schema error at `schema_version`: missing field",
            ))
        }
    }
    let kind = match obj.get("kind") {
        Some(serde_json::Value::String(k)) => k.clone(),
        Some(_) => {
            return Err(CliError::failure(
                "schema error at `kind`: expected a string",
            ))
        }
        None => return Err(CliError::failure("schema error at `kind`: missing field")),
    };
    match kind.as_str() {
        "covering_system" => from_covering_system(typed(value)?, guards),
        "dynamical" => from_dynamical(typed(value)?, guards),
        "metric" => from_metric(typed(value)?),
        "subshift" => from_subshift(typed(value)?),
        other => Err(CliError::failure(format!(
            "schema error at `kind`: unknown kind `{other}`, expected one of covering_system, dynamical, metric, subshift"
        ))),
    }
}

fn ground_set(n: usize, guards: &Guards) -> CliResult<GroundSet> {
    if n > guards.ground {
        return Err(CliError::usage(format!(
            "ground size {n} exceeds the guard of {} (set COVLAB_GUARD_GROUND to raise it)",
            guards.ground
        )));
    }
    GroundSet::new(n).map_err(|e| CliError::failure(format!("schema error at `ground`: {e}")))
}

fn covering_at(ground: GroundSet, lists: &Lists, path: &str) -> CliResult<Covering> {
    for (i, list) in lists.iter().enumerate() {
        for (j, &x) in list.iter().enumerate() {
            if x >= ground.size() {
                return Err(CliError::failure(format!(
                    "schema error at `{path}[{i}][{j}]`: index {x} outside ground set of size {}",
                    ground.size()
                )));
            }
        }
    }
    Covering::from_lists(ground, lists).map_err(|e| CliError::failure(format!("at `{path}`: {e}")))
}

fn structure_from(ground: GroundSet, bases: &[Lists]) -> CliResult<UniformStructure> {
    let coverings = bases
        .iter()
        .enumerate()
        .map(|(i, b)| covering_at(ground, b, &format!("bases[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    UniformStructure::new(coverings).map_err(|e| CliError::failure(format!("at `bases`: {e}")))
}

fn perms_from(degree: usize, gens: &[Vec<usize>]) -> CliResult<Vec<Perm>> {
    gens.iter()
        .enumerate()
        .map(|(i, g)| {
            if g.len() != degree {
                return Err(CliError::failure(format!(
                    "schema error at `generators[{i}]`: {} images for a ground set of size {degree}",
                    g.len()
                )));
            }
            Perm::new(g.clone()).map_err(|e| CliError::failure(format!("at `generators[{i}]`: {e}")))
        })
        .collect()
}

fn from_covering_system(file: CoveringSystemFile, guards: &Guards) -> CliResult<Instance> {
    let ground = ground_set(file.ground, guards)?;
    let structure = structure_from(ground, &file.bases)?;
    Ok(Instance::CoveringSystem { file, structure })
}

fn from_dynamical(file: DynamicalFile, guards: &Guards) -> CliResult<Instance> {
    let ground = ground_set(file.ground, guards)?;
    let structure = structure_from(ground, &file.bases)?;
    let gens = perms_from(file.ground, &file.generators)?;
    let instance = DynamicalInstance::new(structure, gens, guards)?;
    Ok(Instance::Dynamical { file, instance })
}

fn rational_at(text: &str, path: &str) -> CliResult<Rational> {
    parse_rational(text).map_err(|e| CliError::failure(format!("schema error at `{path}`: {e}")))
}

fn from_metric(file: MetricFile) -> CliResult<Instance> {
    let space = match (&file.distances, &file.preset) {
        (Some(rows), None) => {
            let table = rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, d)| rational_at(d, &format!("distances[{i}][{j}]")))
                        .collect::<CliResult<Vec<_>>>()
                })
                .collect::<CliResult<Vec<_>>>()?;
            MetricSpace::new(&table)
                .map_err(|e| CliError::failure(format!("at `distances`: {e}")))?
        }
        (None, Some(Preset::Cantor { level })) => MetricSpace::cantor(*level)
            .map_err(|e| CliError::failure(format!("at `preset`: {e}")))?,
        (
            None,
            Some(Preset::Circle {
                points,
                circumference,
            }),
        ) => {
            let c = rational_at(circumference, "preset.circumference")?;
            MetricSpace::circle(*points, c)
                .map_err(|e| CliError::failure(format!("at `preset`: {e}")))?
        }
        _ => {
            return Err(CliError::failure(
                "schema error at `.`: exactly one of `distances` and `preset` is required",
            ))
        }
    };
    let generators = perms_from(space.size(), &file.generators)?;
    let cover = file
        .cover
        .as_ref()
        .map(|c| covering_at(space.ground(), c, "cover"))
        .transpose()?;
    if let Some(g) = &file.grid {
        g.grid()
            .map_err(|e| CliError::failure(format!("at `grid`: {e}")))?;
    }
    Ok(Instance::Metric {
        file,
        space,
        generators,
        cover,
    })
}

fn from_subshift(file: SubshiftFile) -> CliResult<Instance> {
    let label = file.label.clone().unwrap_or_else(|| "subshift".into());
    let spec = match (&file.matrix, &file.table) {
        (Some(m), None) => SubshiftSpec::sft(label, m)
            .map_err(|e| CliError::failure(format!("at `matrix`: {e}")))?,
        (None, Some(t)) => {
            let counts = t
                .iter()
                .enumerate()
                .map(|(i, c)| match c {
                    Count::Int(v) => Ok(BigUint::from(*v)),
                    Count::Text(s) => s.trim().parse::<BigUint>().map_err(|_| {
                        CliError::failure(format!(
                            "schema error at `table[{i}]`: `{s}` is not a natural number"
                        ))
                    }),
                })
                .collect::<CliResult<Vec<_>>>()?;
            SubshiftSpec::table(label, counts)
                .map_err(|e| CliError::failure(format!("at `table`: {e}")))?
        }
        _ => {
            return Err(CliError::failure(
                "schema error at `.`: exactly one of `matrix` and `table` is required",
            ))
        }
    };
    Ok(Instance::Subshift { file, spec })
}

/// File form of a structure, for generated instances.
pub fn covering_system_file(structure: &UniformStructure, seed: Option<u64>) -> CoveringSystemFile {
    CoveringSystemFile {
        schema_version: SCHEMA_VERSION,
        kind: "covering_system".into(),
        ground: structure.ground().size(),
        bases: structure.bases().iter().map(Covering::to_lists).collect(),
        seed,
    }
}

pub fn dynamical_file(d: &DynamicalInstance, seed: Option<u64>) -> DynamicalFile {
    DynamicalFile {
        schema_version: SCHEMA_VERSION,
        kind: "dynamical".into(),
        ground: d.ground_size(),
        bases: d
            .structure()
            .bases()
            .iter()
            .map(Covering::to_lists)
            .collect(),
        generators: d.generators().iter().map(|g| g.images().to_vec()).collect(),
        seed,
    }
}

pub fn distances_file(space: &MetricSpace) -> MetricFile {
    MetricFile {
        schema_version: SCHEMA_VERSION,
        kind: "metric".into(),
        distances: Some(
            space
                .table()
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
        ),
        preset: None,
        generators: Vec::new(),
        cover: None,
        grid: None,
        seed: None,
    }
}
