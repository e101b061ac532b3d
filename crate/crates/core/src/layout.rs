//! Slot grids, layout instances, layouts and the weighted Manhattan
//! objective.
//!
//! Slots are numbered row-major from zero: slot `j` sits at row `j / cols`,
//! column `j % cols`. Blocked slots take no machine, and an instance always
//! has exactly as many machines as unblocked slots.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub type Machine = usize;
pub type Slot = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    EmptyGrid,
    SlotOutOfRange(Slot),
    MachineOutOfRange(Machine),
    DuplicateFloorLabel(String),
    FloorsNotPartition,
    UnknownFloor(String),
    MachineCount { expected: usize, got: usize },
    SelfPair(Machine),
    ConflictingPair(Machine, Machine),
    ZeroWeight(Machine, Machine),
    InvalidLayout,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyGrid => f.write_str("grid must have at least one row and one column"),
            ModelError::SlotOutOfRange(j) => write!(f, "slot {j} is outside the grid"),
            ModelError::MachineOutOfRange(i) => write!(f, "machine {i} does not exist"),
            ModelError::DuplicateFloorLabel(l) => write!(f, "floor label {l:?} used twice"),
            ModelError::FloorsNotPartition => {
                f.write_str("floors must partition the unblocked slots")
            }
            ModelError::UnknownFloor(l) => write!(f, "unknown floor {l:?}"),
            ModelError::MachineCount { expected, got } => write!(
                f,
                "{got} machines given but the grid has {expected} unblocked slots"
            ),
            ModelError::SelfPair(i) => write!(f, "machine {i} is paired with itself"),
            ModelError::ConflictingPair(i, k) => write!(
                f,
                "machines {i} and {k} are both adjacency- and separation-constrained"
            ),
            ModelError::ZeroWeight(i, k) => write!(f, "soft pair ({i}, {k}) has zero weight"),
            ModelError::InvalidLayout => {
                f.write_str("layout is not a bijection onto the unblocked slots")
            }
        }
    }
}

impl core::error::Error for ModelError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Floor {
    pub label: String,
    pub slots: Vec<Slot>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    blocked: Vec<bool>,
    floors: Vec<Floor>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize) -> Result<Grid, ModelError> {
        if rows == 0 || cols == 0 {
            return Err(ModelError::EmptyGrid);
        }
        Ok(Grid {
            rows,
            cols,
            blocked: vec![false; rows * cols],
            floors: Vec::new(),
        })
    }

    pub fn with_blocked(mut self, slots: &[Slot]) -> Result<Grid, ModelError> {
        for &j in slots {
            self.check_slot(j)?;
            self.blocked[j] = true;
        }
        Ok(self)
    }

    /// Adds a floor. Partition is checked when an [`Instance`] is built.
    pub fn with_floor(mut self, label: impl Into<String>, slots: &[Slot]) -> Result<Grid, ModelError> {
        let label = label.into();
        if self.floors.iter().any(|f| f.label == label) {
            return Err(ModelError::DuplicateFloorLabel(label));
        }
        for &j in slots {
            self.check_slot(j)?;
        }
        let mut slots = slots.to_vec();
        slots.sort_unstable();
        self.floors.push(Floor { label, slots });
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_slots(&self) -> usize {
        self.rows * self.cols
    }

    pub fn row(&self, j: Slot) -> usize {
        j / self.cols
    }

    pub fn col(&self, j: Slot) -> usize {
        j % self.cols
    }

    pub fn slot_at(&self, row: usize, col: usize) -> Slot {
        row * self.cols + col
    }

    pub fn is_blocked(&self, j: Slot) -> bool {
        self.blocked[j]
    }

    pub fn blocked_slots(&self) -> Vec<Slot> {
        (0..self.num_slots()).filter(|&j| self.blocked[j]).collect()
    }

    pub fn unblocked_slots(&self) -> Vec<Slot> {
        (0..self.num_slots()).filter(|&j| !self.blocked[j]).collect()
    }

    pub fn num_unblocked(&self) -> usize {
        self.blocked.iter().filter(|b| !**b).count()
    }

    pub fn floors(&self) -> &[Floor] {
        &self.floors
    }

    pub fn floor_index(&self, label: &str) -> Option<usize> {
        self.floors.iter().position(|f| f.label == label)
    }

    fn check_slot(&self, j: Slot) -> Result<(), ModelError> {
        if j < self.num_slots() {
            Ok(())
        } else {
            Err(ModelError::SlotOutOfRange(j))
        }
    }

    /// `|r(j) - r(l)| + |c(j) - c(l)|`.
    pub fn manhattan_distance(&self, j: Slot, l: Slot) -> Result<usize, ModelError> {
        self.check_slot(j)?;
        self.check_slot(l)?;
        Ok(self.md(j, l))
    }

    #[inline]
    pub(crate) fn md(&self, j: Slot, l: Slot) -> usize {
        self.row(j).abs_diff(self.row(l)) + self.col(j).abs_diff(self.col(l))
    }

    /// Four-connected neighbour pairs `(j, l)` with `j < l`, both unblocked.
    pub fn adjacency_set(&self) -> Vec<(Slot, Slot)> {
        let mut pairs = Vec::new();
        for j in 0..self.num_slots() {
            if self.blocked[j] {
                continue;
            }
            let (r, c) = (self.row(j), self.col(j));
            if c + 1 < self.cols && !self.blocked[j + 1] {
                pairs.push((j, j + 1));
            }
            if r + 1 < self.rows && !self.blocked[j + self.cols] {
                pairs.push((j, j + self.cols));
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// Unblocked four-connected neighbours of `j`.
    pub fn neighbors(&self, j: Slot) -> Vec<Slot> {
        let (r, c) = (self.row(j), self.col(j));
        let mut out = Vec::with_capacity(4);
        if r > 0 {
            out.push(j - self.cols);
        }
        if c > 0 {
            out.push(j - 1);
        }
        if c + 1 < self.cols {
            out.push(j + 1);
        }
        if r + 1 < self.rows {
            out.push(j + self.cols);
        }
        out.retain(|&l| !self.blocked[l]);
        out
    }

    /// Rotations and reflections of the rectangle that map the blocked set
    /// and every floor onto themselves, as slot permutations.
    pub fn automorphisms(&self) -> Vec<Vec<Slot>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut maps: Vec<Vec<Slot>> = Vec::new();
        let square = rows == cols;
        for t in 0..8 {
            if t >= 4 && !square {
                break;
            }
            let perm: Vec<Slot> = (0..self.num_slots())
                .map(|j| {
                    let (r, c) = (self.row(j), self.col(j));
                    let (r2, c2) = match t {
                        0 => (r, c),
                        1 => (rows - 1 - r, c),
                        2 => (r, cols - 1 - c),
                        3 => (rows - 1 - r, cols - 1 - c),
                        4 => (c, r),
                        5 => (cols - 1 - c, rows - 1 - r),
                        6 => (c, rows - 1 - r),
                        _ => (cols - 1 - c, r),
                    };
                    self.slot_at(r2, c2)
                })
                .collect();
            let keeps_blocked = (0..self.num_slots()).all(|j| self.blocked[j] == self.blocked[perm[j]]);
            let keeps_floors = self.floors.iter().all(|f| {
                let image: BTreeSet<Slot> = f.slots.iter().map(|&j| perm[j]).collect();
                image.iter().copied().eq(f.slots.iter().copied())
            });
            if keeps_blocked && keeps_floors {
                maps.push(perm);
            }
        }
        maps
    }

    /// Orbits of the unblocked slots under [`Grid::automorphisms`], each
    /// sorted, ordered by their smallest slot.
    pub fn slot_orbits(&self) -> Vec<Vec<Slot>> {
        let maps = self.automorphisms();
        let mut assigned = vec![false; self.num_slots()];
        let mut orbits = Vec::new();
        for j in self.unblocked_slots() {
            if assigned[j] {
                continue;
            }
            let orbit: BTreeSet<Slot> = maps.iter().map(|m| m[j]).collect();
            for &l in &orbit {
                assigned[l] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Structure {
    AssignmentOnly,
    Adjacency,
    Separation,
    Mixed,
}

impl Structure {
    pub fn as_str(self) -> &'static str {
        match self {
            Structure::AssignmentOnly => "assignment",
            Structure::Adjacency => "adjacency",
            Structure::Separation => "separation",
            Structure::Mixed => "mixed",
        }
    }

    pub fn parse(s: &str) -> Option<Structure> {
        match s {
            "assignment" | "assignment_only" | "assignment-only" => Some(Structure::AssignmentOnly),
            "adjacency" => Some(Structure::Adjacency),
            "separation" => Some(Structure::Separation),
            "mixed" => Some(Structure::Mixed),
            _ => None,
        }
    }

    pub const ALL: [Structure; 4] = [
        Structure::AssignmentOnly,
        Structure::Adjacency,
        Structure::Separation,
        Structure::Mixed,
    ];
}

/// Provenance of an instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Meta {
    pub structure: Structure,
    pub rho_hard: f64,
    pub rho_soft: f64,
    pub seed: u64,
}

impl Default for Meta {
    fn default() -> Self {
        Meta {
            structure: Structure::AssignmentOnly,
            rho_hard: 0.0,
            rho_soft: 0.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SoftPair {
    pub a: Machine,
    pub b: Machine,
    pub weight: u32,
}

/// A layout problem. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    grid: Grid,
    n_machines: usize,
    adjacency: Vec<(Machine, Machine)>,
    separation: Vec<(Machine, Machine)>,
    soft: Vec<SoftPair>,
    on_floor: Vec<(Machine, usize)>,
    meta: Meta,
}

#[derive(Clone, Debug)]
pub struct InstanceBuilder {
    grid: Grid,
    machines: Option<usize>,
    adjacency: Vec<(Machine, Machine)>,
    separation: Vec<(Machine, Machine)>,
    soft: Vec<SoftPair>,
    on_floor: Vec<(Machine, String)>,
    meta: Meta,
}

impl InstanceBuilder {
    /// Declares the machine count; it must equal the number of unblocked slots.
    pub fn machines(mut self, n: usize) -> Self {
        self.machines = Some(n);
        self
    }

    pub fn adjacency(mut self, a: Machine, b: Machine) -> Self {
        self.adjacency.push((a, b));
        self
    }

    pub fn separation(mut self, a: Machine, b: Machine) -> Self {
        self.separation.push((a, b));
        self
    }

    pub fn soft(mut self, a: Machine, b: Machine, weight: u32) -> Self {
        self.soft.push(SoftPair { a, b, weight });
        self
    }

    /// Requires `machine` to sit on the floor labelled `label`.
    pub fn on_floor(mut self, machine: Machine, label: impl Into<String>) -> Self {
        self.on_floor.push((machine, label.into()));
        self
    }

    pub fn meta(mut self, meta: Meta) -> Self {
        self.meta = meta;
        self
    }

    pub fn build(self) -> Result<Instance, ModelError> {
        let grid = self.grid;
        let n = grid.num_unblocked();
        if let Some(m) = self.machines {
            if m != n {
                return Err(ModelError::MachineCount { expected: n, got: m });
            }
        }
        if !grid.floors.is_empty() {
            let mut seen = vec![false; grid.num_slots()];
            for f in &grid.floors {
                for &j in &f.slots {
                    if grid.blocked[j] || seen[j] {
                        return Err(ModelError::FloorsNotPartition);
                    }
                    seen[j] = true;
                }
            }
            if (0..grid.num_slots()).any(|j| !grid.blocked[j] && !seen[j]) {
                return Err(ModelError::FloorsNotPartition);
            }
        }
        let check = |a: Machine, b: Machine| -> Result<(Machine, Machine), ModelError> {
            for m in [a, b] {
                if m >= n {
                    return Err(ModelError::MachineOutOfRange(m));
                }
            }
            if a == b {
                return Err(ModelError::SelfPair(a));
            }
            Ok((a.min(b), a.max(b)))
        };
        let normalize = |pairs: Vec<(Machine, Machine)>| -> Result<Vec<(Machine, Machine)>, ModelError> {
            let mut out = pairs
                .into_iter()
                .map(|(a, b)| check(a, b))
                .collect::<Result<Vec<_>, _>>()?;
            out.sort_unstable();
            out.dedup();
            Ok(out)
        };
        let adjacency = normalize(self.adjacency)?;
        let separation = normalize(self.separation)?;
        if let Some(&(a, b)) = adjacency.iter().find(|p| separation.binary_search(p).is_ok()) {
            return Err(ModelError::ConflictingPair(a, b));
        }
        for p in &self.soft {
            check(p.a, p.b)?;
            if p.weight == 0 {
                return Err(ModelError::ZeroWeight(p.a, p.b));
            }
        }
        let mut on_floor = Vec::with_capacity(self.on_floor.len());
        for (m, label) in self.on_floor {
            if m >= n {
                return Err(ModelError::MachineOutOfRange(m));
            }
            let f = grid
                .floor_index(&label)
                .ok_or(ModelError::UnknownFloor(label))?;
            on_floor.push((m, f));
        }
        on_floor.sort_unstable();
        on_floor.dedup();
        Ok(Instance {
            grid,
            n_machines: n,
            adjacency,
            separation,
            soft: self.soft,
            on_floor,
            meta: self.meta,
        })
    }
}

impl Instance {
    pub fn builder(grid: Grid) -> InstanceBuilder {
        InstanceBuilder {
            grid,
            machines: None,
            adjacency: Vec::new(),
            separation: Vec::new(),
            soft: Vec::new(),
            on_floor: Vec::new(),
            meta: Meta::default(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n_machines(&self) -> usize {
        self.n_machines
    }

    /// Normalized `(min, max)` pairs, sorted.
    pub fn adjacency(&self) -> &[(Machine, Machine)] {
        &self.adjacency
    }

    pub fn separation(&self) -> &[(Machine, Machine)] {
        &self.separation
    }

    pub fn soft_pairs(&self) -> &[SoftPair] {
        &self.soft
    }

    /// `(machine, floor index)` membership rules.
    pub fn on_floor(&self) -> &[(Machine, usize)] {
        &self.on_floor
    }

    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    /// Same instance with soft pairs replaced. Used to reorder or reweight.
    pub fn with_soft_pairs(&self, soft: Vec<SoftPair>) -> Result<Instance, ModelError> {
        let mut b = Instance::builder(self.grid.clone()).meta(self.meta);
        b.adjacency = self.adjacency.clone();
        b.separation = self.separation.clone();
        b.soft = soft;
        b.on_floor = self
            .on_floor
            .iter()
            .map(|&(m, f)| (m, self.grid.floors[f].label.clone()))
            .collect();
        b.build()
    }

    fn structurally_valid(&self, layout: &Layout) -> bool {
        if layout.slot_of.len() != self.n_machines {
            return false;
        }
        let mut used = vec![false; self.grid.num_slots()];
        for &j in &layout.slot_of {
            if j >= self.grid.num_slots() || self.grid.blocked[j] || used[j] {
                return false;
            }
            used[j] = true;
        }
        true
    }

    /// `Σ w · md(slot(a), slot(b))` over soft pairs. Hard constraints are
    /// not checked; only the bijection is.
    pub fn evaluate_objective(&self, layout: &Layout) -> Result<u64, ModelError> {
        if !self.structurally_valid(layout) {
            return Err(ModelError::InvalidLayout);
        }
        Ok(self.objective_unchecked(layout))
    }

    pub(crate) fn objective_unchecked(&self, layout: &Layout) -> u64 {
        self.soft
            .iter()
            .map(|p| p.weight as u64 * self.grid.md(layout.slot_of[p.a], layout.slot_of[p.b]) as u64)
            .sum()
    }

    /// Every violated rule. Empty iff the layout is feasible.
    pub fn validate_layout(&self, layout: &Layout) -> Vec<Violation> {
        let mut out = Vec::new();
        let slots = &layout.slot_of;
        if slots.len() != self.n_machines {
            out.push(Violation::WrongLength {
                expected: self.n_machines,
                got: slots.len(),
            });
            return out;
        }
        let mut holder: Vec<Option<Machine>> = vec![None; self.grid.num_slots()];
        let mut placed = true;
        for (i, &j) in slots.iter().enumerate() {
            if j >= self.grid.num_slots() {
                out.push(Violation::SlotOutOfRange { machine: i, slot: j });
                placed = false;
                continue;
            }
            if self.grid.blocked[j] {
                out.push(Violation::BlockedSlot { machine: i, slot: j });
            }
            match holder[j] {
                Some(k) => out.push(Violation::SharedSlot {
                    slot: j,
                    machines: (k, i),
                }),
                None => holder[j] = Some(i),
            }
        }
        if !placed {
            return out;
        }
        for &(a, b) in &self.adjacency {
            if self.grid.md(slots[a], slots[b]) != 1 {
                out.push(Violation::Adjacency(a, b));
            }
        }
        for &(a, b) in &self.separation {
            if self.grid.md(slots[a], slots[b]) == 1 {
                out.push(Violation::Separation(a, b));
            }
        }
        for &(m, f) in &self.on_floor {
            if self.grid.floors[f].slots.binary_search(&slots[m]).is_err() {
                out.push(Violation::Floor { machine: m, floor: f });
            }
        }
        out
    }

    /// Same verdict as `validate_layout(layout).is_empty()`, without
    /// collecting violations.
    pub fn is_feasible(&self, layout: &Layout) -> bool {
        if !self.structurally_valid(layout) {
            return false;
        }
        let s = &layout.slot_of;
        self.adjacency.iter().all(|&(a, b)| self.grid.md(s[a], s[b]) == 1)
            && self.separation.iter().all(|&(a, b)| self.grid.md(s[a], s[b]) != 1)
            && self
                .on_floor
                .iter()
                .all(|&(m, f)| self.grid.floors[f].slots.binary_search(&s[m]).is_ok())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, got: usize },
    SlotOutOfRange { machine: Machine, slot: Slot },
    BlockedSlot { machine: Machine, slot: Slot },
    SharedSlot { slot: Slot, machines: (Machine, Machine) },
    Adjacency(Machine, Machine),
    Separation(Machine, Machine),
    Floor { machine: Machine, floor: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongLength { expected, got } => {
                write!(f, "layout places {got} machines, expected {expected}")
            }
            Violation::SlotOutOfRange { machine, slot } => {
                write!(f, "machine {machine} placed outside the grid (slot {slot})")
            }
            Violation::BlockedSlot { machine, slot } => {
                write!(f, "machine {machine} placed on blocked slot {slot}")
            }
            Violation::SharedSlot { slot, machines } => write!(
                f,
                "machines {} and {} share slot {slot}",
                machines.0, machines.1
            ),
            Violation::Adjacency(a, b) => write!(f, "machines {a} and {b} must be adjacent"),
            Violation::Separation(a, b) => write!(f, "machines {a} and {b} must not be adjacent"),
            Violation::Floor { machine, floor } => {
                write!(f, "machine {machine} is not on floor #{floor}")
            }
        }
    }
}

/// Machine → slot assignment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Layout {
    pub slot_of: Vec<Slot>,
}

impl Layout {
    pub fn new(slot_of: Vec<Slot>) -> Layout {
        Layout { slot_of }
    }

    pub fn slot(&self, machine: Machine) -> Slot {
        self.slot_of[machine]
    }
}
