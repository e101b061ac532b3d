//! JSON instance files.
//!
//! ```json
//! {"rows": 2, "cols": 2, "blocked": [], "machines": 4,
//!  "adjacency": [[0, 1]], "separation": [], "soft": [[2, 3, 5]],
//!  "meta": {"structure": "mixed", "rho_hard": 0.15, "rho_soft": 0.05, "seed": 7}}
//! ```
//!
//! `floors` (label → slot ids) and `on_floor` (`[machine, label]` pairs) are
//! optional. Unknown fields are rejected.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use slotsat_core::layout::{Grid, Instance, Machine, Meta, ModelError, Slot, Structure};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceIoError {
    #[error("invalid instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Model(#[from] ModelError),
    #[error("unknown structure `{0}`")]
    UnknownStructure(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaFile {
    structure: String,
    rho_hard: f64,
    rho_soft: f64,
    seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    rows: usize,
    cols: usize,
    #[serde(default)]
    blocked: Vec<Slot>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    floors: BTreeMap<String, Vec<Slot>>,
    machines: usize,
    #[serde(default)]
    adjacency: Vec<(Machine, Machine)>,
    #[serde(default)]
    separation: Vec<(Machine, Machine)>,
    #[serde(default)]
    soft: Vec<(Machine, Machine, u32)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    on_floor: Vec<(Machine, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<MetaFile>,
}

pub fn instance_to_json(instance: &Instance) -> String {
    let grid = instance.grid();
    let meta = instance.meta();
    let file = InstanceFile {
        rows: grid.rows(),
        cols: grid.cols(),
        blocked: grid.blocked_slots(),
        floors: grid
            .floors()
            .iter()
            .map(|f| (f.label.clone(), f.slots.clone()))
            .collect(),
        machines: instance.n_machines(),
        adjacency: instance.adjacency().to_vec(),
        separation: instance.separation().to_vec(),
        soft: instance
            .soft_pairs()
            .iter()
            .map(|p| (p.a, p.b, p.weight))
            .collect(),
        on_floor: instance
            .on_floor()
            .iter()
            .map(|&(m, f)| (m, grid.floors()[f].label.clone()))
            .collect(),
        meta: Some(MetaFile {
            structure: meta.structure.as_str().to_string(),
            rho_hard: meta.rho_hard,
            rho_soft: meta.rho_soft,
            seed: meta.seed,
        }),
    };
    serde_json::to_string_pretty(&file).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<Instance, InstanceIoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let mut grid = Grid::new(file.rows, file.cols)?.with_blocked(&file.blocked)?;
    for (label, slots) in &file.floors {
        grid = grid.with_floor(label.clone(), slots)?;
    }
    let mut b = Instance::builder(grid).machines(file.machines);
    for (a, c) in file.adjacency {
        b = b.adjacency(a, c);
    }
    for (a, c) in file.separation {
        b = b.separation(a, c);
    }
    for (a, c, w) in file.soft {
        b = b.soft(a, c, w);
    }
    for (m, label) in file.on_floor {
        b = b.on_floor(m, label);
    }
    if let Some(meta) = file.meta {
        let structure = Structure::parse(&meta.structure)
            .ok_or(InstanceIoError::UnknownStructure(meta.structure))?;
        b = b.meta(Meta {
            structure,
            rho_hard: meta.rho_hard,
            rho_soft: meta.rho_soft,
            seed: meta.seed,
        });
    }
    Ok(b.build()?)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, InstanceIoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| InstanceIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    instance_from_json(&text)
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> Result<(), InstanceIoError> {
    let path = path.as_ref();
    fs::write(path, instance_to_json(instance) + "\n").map_err(|source| InstanceIoError::Io {
        path: path.display().to_string(),
        source,
    })
}
