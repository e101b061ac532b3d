//! Seeded instance generation and the experiment matrices.

use alloc::vec::Vec;
use core::fmt;

use crate::layout::{Grid, Instance, Machine, Meta, ModelError, Structure};
use crate::rng::SplitMix64;

pub const WEIGHT_RANGE: (u32, u32) = (1, 9);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub rows: usize,
    pub cols: usize,
    pub structure: Structure,
    pub rho_hard: f64,
    pub rho_soft: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(rows: usize, cols: usize, structure: Structure, rho_hard: f64, rho_soft: f64, seed: u64) -> Self {
        GeneratorSpec {
            rows,
            cols,
            structure,
            rho_hard,
            rho_soft,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GenerateError {
    EmptyGrid,
    DensityOutOfRange(f64),
    TooManyPairs { requested: usize, available: usize },
    Model(ModelError),
}

impl fmt::Display for GenerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerateError::EmptyGrid => f.write_str("grid must have at least one slot"),
            GenerateError::DensityOutOfRange(r) => write!(f, "density {r} is outside [0, 1]"),
            GenerateError::TooManyPairs { requested, available } => write!(
                f,
                "densities request {requested} machine pairs but only {available} exist"
            ),
            GenerateError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GenerateError {}

/// `⌈rho · total⌉`, computed so that products that are integers up to
/// floating-point noise (0.05 · 300 = 15.000000000000002) are not bumped up.
pub fn pair_count(rho: f64, total: usize) -> usize {
    let x = rho * total as f64;
    let floor = x as usize;
    if x - floor as f64 > 1e-9 {
        floor + 1
    } else {
        floor
    }
}

/// Builds the instance described by `spec`. A pure function of `spec`.
///
/// All `C(n, 2)` unordered machine pairs are listed lexicographically and
/// shuffled by a partial Fisher-Yates pass. The first `⌈rho_hard · C(n,2)⌉`
/// become hard constraints (Mixed alternates adjacency, separation, ...),
/// the next `⌈rho_soft · C(n,2)⌉` become soft pairs with weights drawn
/// uniformly from [`WEIGHT_RANGE`].
pub fn generate(spec: &GeneratorSpec) -> Result<Instance, GenerateError> {
    if spec.rows == 0 || spec.cols == 0 {
        return Err(GenerateError::EmptyGrid);
    }
    for rho in [spec.rho_hard, spec.rho_soft] {
        if !(0.0..=1.0).contains(&rho) {
            return Err(GenerateError::DensityOutOfRange(rho));
        }
    }
    let n = spec.rows * spec.cols;
    let mut pairs: Vec<(Machine, Machine)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            pairs.push((a, b));
        }
    }
    let total = pairs.len();
    let hard = match spec.structure {
        Structure::AssignmentOnly => 0,
        _ => pair_count(spec.rho_hard, total),
    };
    let soft = pair_count(spec.rho_soft, total);
    if hard + soft > total {
        return Err(GenerateError::TooManyPairs {
            requested: hard + soft,
            available: total,
        });
    }
    let mut rng = SplitMix64::new(spec.seed);
    for t in 0..hard + soft {
        let k = t + rng.below((total - t) as u64) as usize;
        pairs.swap(t, k);
    }
    let grid = Grid::new(spec.rows, spec.cols).map_err(GenerateError::Model)?;
    let mut b = Instance::builder(grid).machines(n).meta(Meta {
        structure: spec.structure,
        rho_hard: spec.rho_hard,
        rho_soft: spec.rho_soft,
        seed: spec.seed,
    });
    for (t, &(a, c)) in pairs[..hard].iter().enumerate() {
        let adjacency = match spec.structure {
            Structure::Adjacency => true,
            Structure::Separation => false,
            _ => t % 2 == 0,
        };
        b = if adjacency { b.adjacency(a, c) } else { b.separation(a, c) };
    }
    let span = (WEIGHT_RANGE.1 - WEIGHT_RANGE.0 + 1) as u64;
    for &(a, c) in &pairs[hard..hard + soft] {
        let w = WEIGHT_RANGE.0 + rng.below(span) as u32;
        b = b.soft(a, c, w);
    }
    b.build().map_err(GenerateError::Model)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExperimentKind {
    Scaling,
    Density,
    Symmetry,
    Optimization,
    /// The two SAT/branch-and-bound hybrids on the optimization instances.
    Hybrids,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Density => "density",
            ExperimentKind::Symmetry => "symmetry",
            ExperimentKind::Optimization => "optimization",
            ExperimentKind::Hybrids => "hybrids",
        }
    }

    pub fn parse(s: &str) -> Option<ExperimentKind> {
        match s {
            "scaling" => Some(ExperimentKind::Scaling),
            "density" => Some(ExperimentKind::Density),
            "symmetry" => Some(ExperimentKind::Symmetry),
            "optimization" => Some(ExperimentKind::Optimization),
            "hybrids" => Some(ExperimentKind::Hybrids),
            _ => None,
        }
    }
}

pub const DENSITY_LEVELS: [f64; 5] = [0.05, 0.10, 0.15, 0.25, 0.35];

/// Instance specs for one experiment, each replicated over `seeds`.
pub fn experiment_matrix(kind: ExperimentKind, seeds: &[u64]) -> Vec<GeneratorSpec> {
    let mixed = Structure::Mixed;
    let base: Vec<(usize, usize, f64, f64)> = match kind {
        ExperimentKind::Scaling => [2, 3, 4, 5].iter().map(|&s| (s, s, 0.15, 0.0)).collect(),
        ExperimentKind::Density => DENSITY_LEVELS.iter().map(|&r| (3, 3, r, 0.0)).collect(),
        ExperimentKind::Symmetry => [3, 4].iter().map(|&s| (s, s, 0.20, 0.0)).collect(),
        ExperimentKind::Optimization | ExperimentKind::Hybrids => {
            [5, 6].iter().map(|&s| (s, s, 0.05, 0.05)).collect()
        }
    };
    let mut out = Vec::with_capacity(base.len() * seeds.len());
    for &(r, c, rho_hard, rho_soft) in &base {
        for &seed in seeds {
            out.push(GeneratorSpec::new(r, c, mixed, rho_hard, rho_soft, seed));
        }
    }
    out
}
