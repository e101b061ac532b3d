//! CNF encodings of layout feasibility.
//!
//! Primary variable `x(i, j)` means "machine `i` sits in slot `j`" and is
//! numbered `1 + i * n_slots + j`, where `n_slots` counts blocked slots too.
//! Auxiliary variables (sequential-counter registers, Tseitin pair
//! variables) are numbered after all primary ones.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::layout::{Instance, Layout, Machine, Slot};
use crate::sat::{CnfFormula, Lit, Var};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AmoMode {
    #[default]
    Pairwise,
    Sequential,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdjacencyMode {
    #[default]
    ForbiddenPairs,
    Tseitin,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymmetryMode {
    #[default]
    None,
    /// Pin machine 0 to the first unblocked slot. Unsound whenever the
    /// constraints are not invariant under the grid's symmetries.
    FixFirst,
    /// Restrict machine 0 to one representative slot per orbit of the
    /// grid's rotation/reflection group. Preserves satisfiability.
    Orbit,
}

impl AmoMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AmoMode::Pairwise => "pairwise",
            AmoMode::Sequential => "sequential",
        }
    }

    pub fn parse(s: &str) -> Option<AmoMode> {
        match s {
            "pairwise" => Some(AmoMode::Pairwise),
            "sequential" => Some(AmoMode::Sequential),
            _ => None,
        }
    }
}

impl AdjacencyMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AdjacencyMode::ForbiddenPairs => "forbidden_pairs",
            AdjacencyMode::Tseitin => "tseitin",
        }
    }

    pub fn parse(s: &str) -> Option<AdjacencyMode> {
        match s {
            "forbidden_pairs" => Some(AdjacencyMode::ForbiddenPairs),
            "tseitin" => Some(AdjacencyMode::Tseitin),
            _ => None,
        }
    }
}

impl SymmetryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryMode::None => "none",
            SymmetryMode::FixFirst => "fix_first",
            SymmetryMode::Orbit => "orbit",
        }
    }

    pub fn parse(s: &str) -> Option<SymmetryMode> {
        match s {
            "none" => Some(SymmetryMode::None),
            "fix_first" => Some(SymmetryMode::FixFirst),
            "orbit" => Some(SymmetryMode::Orbit),
            _ => None,
        }
    }

    /// Slots machine 0 may occupy under this mode, or `None` for no
    /// restriction.
    pub fn machine0_slots(self, instance: &Instance) -> Option<Vec<Slot>> {
        let grid = instance.grid();
        match self {
            SymmetryMode::None => None,
            SymmetryMode::FixFirst => Some(grid.unblocked_slots().into_iter().take(1).collect()),
            SymmetryMode::Orbit => Some(grid.slot_orbits().iter().map(|o| o[0]).collect()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EncodingConfig {
    pub amo: AmoMode,
    pub adjacency: AdjacencyMode,
    pub symmetry: SymmetryMode,
}

impl EncodingConfig {
    /// All four amo × adjacency combinations, without symmetry breaking.
    pub fn all_modes() -> [EncodingConfig; 4] {
        let mut out = [EncodingConfig::default(); 4];
        let mut k = 0;
        for amo in [AmoMode::Pairwise, AmoMode::Sequential] {
            for adjacency in [AdjacencyMode::ForbiddenPairs, AdjacencyMode::Tseitin] {
                out[k] = EncodingConfig {
                    amo,
                    adjacency,
                    symmetry: SymmetryMode::None,
                };
                k += 1;
            }
        }
        out
    }
}

/// Which constraint an auxiliary variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintSite {
    /// Exactly-one over a machine's slots.
    Machine(Machine),
    /// Exactly-one over a slot's machines.
    Slot(Slot),
    Adjacency(Machine, Machine),
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxKind {
    /// Register `s_index` of a sequential counter.
    Counter { site: ConstraintSite, index: usize },
    /// `y ↔ x(a, slot_a) ∧ x(b, slot_b)`.
    Pair { a: Machine, b: Machine, slot_a: Slot, slot_b: Slot },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuxVar {
    pub var: Var,
    pub kind: AuxKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarMap {
    n_machines: usize,
    n_slots: usize,
    aux: Vec<AuxVar>,
}

impl VarMap {
    pub fn new(n_machines: usize, n_slots: usize) -> VarMap {
        VarMap {
            n_machines,
            n_slots,
            aux: Vec::new(),
        }
    }

    pub fn n_machines(&self) -> usize {
        self.n_machines
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn num_primary(&self) -> usize {
        self.n_machines * self.n_slots
    }

    pub fn x(&self, machine: Machine, slot: Slot) -> Var {
        debug_assert!(machine < self.n_machines && slot < self.n_slots);
        Var::new((1 + machine * self.n_slots + slot) as u32)
    }

    /// Inverse of [`VarMap::x`]; `None` for auxiliary variables.
    pub fn primary(&self, var: Var) -> Option<(Machine, Slot)> {
        let k = var.index() as usize - 1;
        (k < self.num_primary()).then(|| (k / self.n_slots, k % self.n_slots))
    }

    pub fn aux(&self) -> &[AuxVar] {
        &self.aux
    }

    pub fn aux_kind(&self, var: Var) -> Option<AuxKind> {
        self.aux.iter().find(|a| a.var == var).map(|a| a.kind)
    }

    /// All primary variables, machine-major.
    pub fn projection(&self) -> Vec<Var> {
        (1..=self.num_primary() as u32).map(Var::new).collect()
    }

    /// Positive literals pinning every machine to its slot in `layout`.
    pub fn layout_literals(&self, layout: &Layout) -> Vec<Lit> {
        layout
            .slot_of
            .iter()
            .enumerate()
            .map(|(i, &j)| self.x(i, j).pos())
            .collect()
    }

    fn new_aux(&mut self, formula: &mut CnfFormula, kind: AuxKind) -> Var {
        let var = formula.new_var();
        self.aux.push(AuxVar { var, kind });
        var
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EncodeError {
    EmptyExactlyOne,
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::EmptyExactlyOne => f.write_str("exactly-one over an empty literal list"),
        }
    }
}

impl core::error::Error for EncodeError {}

/// Exactly one of `lits` is true. Appends clauses to `formula` and returns
/// the auxiliary variables created (none for `Pairwise`).
///
/// Pairwise: one at-least-one clause plus `C(m, 2)` binary exclusions.
/// Sequential: one at-least-one clause plus a sequential counter with
/// `m - 1` registers `s_1..s_{m-1}`, where `s_i` means "some of
/// `lits[..=i]` is true".
pub fn exactly_one(
    lits: &[Lit],
    mode: AmoMode,
    site: ConstraintSite,
    varmap: &mut VarMap,
    formula: &mut CnfFormula,
) -> Result<Vec<Var>, EncodeError> {
    if lits.is_empty() {
        return Err(EncodeError::EmptyExactlyOne);
    }
    formula.add_clause(lits.to_vec());
    let m = lits.len();
    match mode {
        AmoMode::Pairwise => {
            for a in 0..m {
                for b in a + 1..m {
                    formula.add_clause(vec![!lits[a], !lits[b]]);
                }
            }
            Ok(Vec::new())
        }
        AmoMode::Sequential => {
            if m == 1 {
                return Ok(Vec::new());
            }
            let regs: Vec<Var> = (0..m - 1)
                .map(|index| varmap.new_aux(formula, AuxKind::Counter { site, index }))
                .collect();
            formula.add_clause(vec![!lits[0], regs[0].pos()]);
            for i in 1..m - 1 {
                formula.add_clause(vec![!lits[i], regs[i].pos()]);
                formula.add_clause(vec![regs[i - 1].neg(), regs[i].pos()]);
                formula.add_clause(vec![!lits[i], regs[i - 1].neg()]);
            }
            formula.add_clause(vec![!lits[m - 1], regs[m - 2].neg()]);
            Ok(regs)
        }
    }
}

/// Forces machines `a` and `b` onto four-connected neighbouring slots.
pub fn encode_adjacency(
    instance: &Instance,
    (a, b): (Machine, Machine),
    mode: AdjacencyMode,
    varmap: &mut VarMap,
    formula: &mut CnfFormula,
) {
    let grid = instance.grid();
    let slots = grid.unblocked_slots();
    match mode {
        AdjacencyMode::ForbiddenPairs => {
            for &j in &slots {
                for &l in &slots {
                    if grid.md(j, l) != 1 {
                        formula.add_clause(vec![varmap.x(a, j).neg(), varmap.x(b, l).neg()]);
                    }
                }
            }
        }
        AdjacencyMode::Tseitin => {
            let mut any = Vec::new();
            for (j, l) in grid.adjacency_set() {
                for (sa, sb) in [(j, l), (l, j)] {
                    let y = varmap.new_aux(
                        formula,
                        AuxKind::Pair {
                            a,
                            b,
                            slot_a: sa,
                            slot_b: sb,
                        },
                    );
                    let (xa, xb) = (varmap.x(a, sa), varmap.x(b, sb));
                    formula.add_clause(vec![y.neg(), xa.pos()]);
                    formula.add_clause(vec![y.neg(), xb.pos()]);
                    formula.add_clause(vec![y.pos(), xa.neg(), xb.neg()]);
                    any.push(y.pos());
                }
            }
            formula.add_clause(any);
        }
    }
}

/// Forbids machines `a` and `b` from neighbouring slots.
pub fn encode_separation(
    instance: &Instance,
    (a, b): (Machine, Machine),
    varmap: &VarMap,
    formula: &mut CnfFormula,
) {
    for (j, l) in instance.grid().adjacency_set() {
        for (sa, sb) in [(j, l), (l, j)] {
            formula.add_clause(vec![varmap.x(a, sa).neg(), varmap.x(b, sb).neg()]);
        }
    }
}

/// Unit exclusions for blocked slots and an at-least-one clause per
/// must-be-on-floor rule. A rule naming an empty floor yields the empty
/// clause.
pub fn encode_blocked_and_floors(instance: &Instance, varmap: &VarMap, formula: &mut CnfFormula) {
    let grid = instance.grid();
    for j in grid.blocked_slots() {
        for i in 0..instance.n_machines() {
            formula.add_clause(vec![varmap.x(i, j).neg()]);
        }
    }
    for &(m, f) in instance.on_floor() {
        let clause = grid.floors()[f].slots.iter().map(|&j| varmap.x(m, j).pos()).collect();
        formula.add_clause(clause);
    }
}

pub fn encode_symmetry_breaking(
    instance: &Instance,
    mode: SymmetryMode,
    varmap: &VarMap,
    formula: &mut CnfFormula,
) {
    if instance.n_machines() == 0 {
        return;
    }
    if let Some(slots) = mode.machine0_slots(instance) {
        formula.add_clause(slots.iter().map(|&j| varmap.x(0, j).pos()).collect());
    }
}

/// Full feasibility encoding of `instance`.
pub fn encode_feasibility(instance: &Instance, config: &EncodingConfig) -> (CnfFormula, VarMap) {
    let grid = instance.grid();
    let n = instance.n_machines();
    let mut varmap = VarMap::new(n, grid.num_slots());
    let mut formula = CnfFormula::with_vars(varmap.num_primary() as u32);
    let open = grid.unblocked_slots();

    for i in 0..n {
        let lits: Vec<Lit> = open.iter().map(|&j| varmap.x(i, j).pos()).collect();
        exactly_one(&lits, config.amo, ConstraintSite::Machine(i), &mut varmap, &mut formula)
            .expect("instances have at least one unblocked slot per machine");
    }
    for &j in &open {
        let lits: Vec<Lit> = (0..n).map(|i| varmap.x(i, j).pos()).collect();
        exactly_one(&lits, config.amo, ConstraintSite::Slot(j), &mut varmap, &mut formula)
            .expect("instances have one machine per unblocked slot");
    }
    encode_blocked_and_floors(instance, &varmap, &mut formula);
    for &pair in instance.adjacency() {
        encode_adjacency(instance, pair, config.adjacency, &mut varmap, &mut formula);
    }
    for &pair in instance.separation() {
        encode_separation(instance, pair, &varmap, &mut formula);
    }
    encode_symmetry_breaking(instance, config.symmetry, &varmap, &mut formula);
    (formula, varmap)
}

/// A model that does not place some machine in exactly one slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeError {
    pub machine: Machine,
    pub true_slots: usize,
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "model places machine {} in {} slots, expected exactly one",
            self.machine, self.true_slots
        )
    }
}

impl core::error::Error for DecodeError {}

/// Reads the layout off a model (`values[v - 1]` for variable `v`).
pub fn decode_model(values: &[bool], varmap: &VarMap) -> Result<Layout, DecodeError> {
    let mut slot_of = Vec::with_capacity(varmap.n_machines());
    for i in 0..varmap.n_machines() {
        let on: Vec<Slot> = (0..varmap.n_slots())
            .filter(|&j| values.get(varmap.x(i, j).idx()).copied().unwrap_or(false))
            .collect();
        if on.len() != 1 {
            return Err(DecodeError {
                machine: i,
                true_slots: on.len(),
            });
        }
        slot_of.push(on[0]);
    }
    Ok(Layout::new(slot_of))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::Grid;
    use crate::sat::{Blocking, SolveStatus, Solver, SolverConfig};

    fn grid(r: usize, c: usize) -> Grid {
        Grid::new(r, c).unwrap()
    }

    fn count_models(formula: &CnfFormula, varmap: &VarMap) -> usize {
        let mut s = Solver::from_formula(formula, SolverConfig::default());
        let e = s.enumerate_models(100_000, &varmap.projection(), Blocking::TruePositives);
        assert!(e.complete);
        e.models.len()
    }

    #[test]
    fn two_by_two_pairwise_counts() {
        let inst = Instance::builder(grid(2, 2)).build().unwrap();
        let (f, vm) = encode_feasibility(&inst, &EncodingConfig::default());
        assert_eq!(f.num_vars(), 16);
        assert_eq!(f.len(), 56);
        assert!(vm.aux().is_empty());
        assert_eq!(count_models(&f, &vm), 24);
    }

    #[test]
    fn exactly_one_sizes() {
        let lits: Vec<Lit> = (1..=4).map(|v| Var::new(v).pos()).collect();
        let mut vm = VarMap::new(0, 0);
        let mut f = CnfFormula::with_vars(4);
        let aux = exactly_one(&lits, AmoMode::Pairwise, ConstraintSite::Other, &mut vm, &mut f).unwrap();
        assert_eq!((f.len(), aux.len()), (7, 0));

        let mut f = CnfFormula::with_vars(4);
        let aux = exactly_one(&lits, AmoMode::Sequential, ConstraintSite::Other, &mut vm, &mut f).unwrap();
        assert_eq!(aux.len(), 3);
        assert_eq!(f.num_vars(), 7);

        for mode in [AmoMode::Pairwise, AmoMode::Sequential] {
            let mut f = CnfFormula::with_vars(1);
            let one = [Var::new(1).pos()];
            exactly_one(&one, mode, ConstraintSite::Other, &mut vm, &mut f).unwrap();
            assert_eq!(f.clauses(), &[vec![Var::new(1).pos()]]);
            assert_eq!(
                exactly_one(&[], mode, ConstraintSite::Other, &mut vm, &mut f),
                Err(EncodeError::EmptyExactlyOne)
            );
        }
    }

    #[test]
    fn sequential_counter_projects_to_exactly_one() {
        // enumerate all 2^7 assignments of the 4-literal counter by hand
        let lits: Vec<Lit> = (1..=4).map(|v| Var::new(v).pos()).collect();
        let mut vm = VarMap::new(0, 0);
        let mut f = CnfFormula::with_vars(4);
        exactly_one(&lits, AmoMode::Sequential, ConstraintSite::Other, &mut vm, &mut f).unwrap();
        let mut projected = alloc::collections::BTreeSet::new();
        for bits in 0u32..128 {
            let model: Vec<bool> = (0..7).map(|k| bits >> k & 1 == 1).collect();
            if f.is_satisfied_by(&model) {
                projected.insert(model[..4].to_vec());
            }
        }
        assert_eq!(projected.len(), 4);
        assert!(projected.iter().all(|m| m.iter().filter(|b| **b).count() == 1));
    }

    #[test]
    fn adjacency_clause_counts() {
        let inst = Instance::builder(grid(1, 3)).adjacency(0, 1).build().unwrap();
        let mut vm = VarMap::new(3, 3);
        let mut f = CnfFormula::with_vars(9);
        encode_adjacency(&inst, (0, 1), AdjacencyMode::ForbiddenPairs, &mut vm, &mut f);
        assert_eq!(f.len(), 5);

        let inst = Instance::builder(grid(2, 2)).adjacency(0, 1).build().unwrap();
        let mut vm = VarMap::new(4, 4);
        let mut f = CnfFormula::with_vars(16);
        encode_adjacency(&inst, (0, 1), AdjacencyMode::Tseitin, &mut vm, &mut f);
        assert_eq!(vm.aux().len(), 8);
        assert_eq!(f.len(), 8 * 3 + 1);
        assert!(matches!(vm.aux_kind(Var::new(17)), Some(AuxKind::Pair { a: 0, b: 1, .. })));
    }

    #[test]
    fn forbidden_pairs_count_formula() {
        for (r, c) in [(1, 4), (2, 3), (3, 3), (4, 4)] {
            let inst = Instance::builder(grid(r, c)).adjacency(0, 1).build().unwrap();
            let s = r * c;
            let e = inst.grid().adjacency_set().len();
            let mut vm = VarMap::new(s, s);
            let mut f = CnfFormula::with_vars((s * s) as u32);
            encode_adjacency(&inst, (0, 1), AdjacencyMode::ForbiddenPairs, &mut vm, &mut f);
            assert_eq!(f.len(), s * s - 2 * e);
        }
    }

    fn solve(inst: &Instance, config: &EncodingConfig) -> (SolveStatus, Option<Layout>) {
        let (f, vm) = encode_feasibility(inst, config);
        let mut s = Solver::from_formula(&f, SolverConfig::default());
        let out = s.solve(&[]);
        let layout = out.model.map(|m| decode_model(m.values(), &vm).unwrap());
        (out.status, layout)
    }

    #[test]
    fn line_adjacency_and_separation() {
        let adj = Instance::builder(grid(1, 2)).adjacency(0, 1).build().unwrap();
        for config in EncodingConfig::all_modes() {
            let (st, l) = solve(&adj, &config);
            assert_eq!(st, SolveStatus::Sat);
            let l = l.unwrap();
            assert!(l == Layout::new(vec![0, 1]) || l == Layout::new(vec![1, 0]));
        }
        let (f, vm) = encode_feasibility(&adj, &EncodingConfig::default());
        assert_eq!(count_models(&f, &vm), 2);

        let sep = Instance::builder(grid(1, 2)).separation(0, 1).build().unwrap();
        assert_eq!(solve(&sep, &EncodingConfig::default()).0, SolveStatus::Unsat);

        let sep = Instance::builder(grid(1, 3)).separation(0, 2).build().unwrap();
        let (st, l) = solve(&sep, &EncodingConfig::default());
        assert_eq!(st, SolveStatus::Sat);
        assert_eq!(l.unwrap().slot(1), 1);
    }

    #[test]
    fn contradictory_pair_is_unsat() {
        // the instance builder refuses the overlap, so encode by hand
        let inst = Instance::builder(grid(1, 3)).adjacency(0, 1).build().unwrap();
        let (mut f, vm) = encode_feasibility(&inst, &EncodingConfig::default());
        encode_separation(&inst, (0, 1), &vm, &mut f);
        let mut s = Solver::from_formula(&f, SolverConfig::default());
        assert_eq!(s.solve(&[]).status, SolveStatus::Unsat);
    }

    #[test]
    fn blocked_units_and_floors() {
        let inst = Instance::builder(grid(2, 2).with_blocked(&[3]).unwrap()).build().unwrap();
        let vm = VarMap::new(3, 4);
        let mut f = CnfFormula::with_vars(12);
        encode_blocked_and_floors(&inst, &vm, &mut f);
        assert_eq!(f.len(), 3);
        for (i, c) in f.clauses().iter().enumerate() {
            assert_eq!(c, &vec![vm.x(i, 3).neg()]);
        }

        let g = grid(1, 3).with_floor("a", &[0]).unwrap().with_floor("b", &[1, 2]).unwrap();
        let one = Instance::builder(g.clone()).on_floor(1, "a").build().unwrap();
        let vm = VarMap::new(3, 3);
        let mut f = CnfFormula::with_vars(9);
        encode_blocked_and_floors(&one, &vm, &mut f);
        assert_eq!(f.clauses(), &[vec![vm.x(1, 0).pos()]]);

        let two = Instance::builder(g).on_floor(1, "a").on_floor(2, "a").build().unwrap();
        assert_eq!(solve(&two, &EncodingConfig::default()).0, SolveStatus::Unsat);
    }

    #[test]
    fn empty_floor_yields_empty_clause() {
        let g = grid(1, 2).with_floor("a", &[0, 1]).unwrap().with_floor("attic", &[]).unwrap();
        let inst = Instance::builder(g).on_floor(0, "attic").build().unwrap();
        let (f, _) = encode_feasibility(&inst, &EncodingConfig::default());
        assert!(f.has_empty_clause());
        assert_eq!(solve(&inst, &EncodingConfig::default()).0, SolveStatus::Unsat);
    }

    #[test]
    fn symmetry_model_counts() {
        let inst = Instance::builder(grid(2, 2)).build().unwrap();
        for mode in [SymmetryMode::FixFirst, SymmetryMode::Orbit] {
            let config = EncodingConfig {
                symmetry: mode,
                ..EncodingConfig::default()
            };
            let (f, vm) = encode_feasibility(&inst, &config);
            assert_eq!(f.clauses().last().unwrap(), &vec![vm.x(0, 0).pos()]);
            assert_eq!(count_models(&f, &vm), 6);
        }
    }

    #[test]
    fn decode_rejects_broken_models() {
        let vm = VarMap::new(2, 2);
        let mut values = vec![false; 4];
        values[vm.x(0, 0).idx()] = true;
        values[vm.x(0, 1).idx()] = true;
        values[vm.x(1, 1).idx()] = true;
        assert_eq!(
            decode_model(&values, &vm),
            Err(DecodeError {
                machine: 0,
                true_slots: 2
            })
        );
        let values = vec![false; 4];
        assert_eq!(decode_model(&values, &vm).unwrap_err().true_slots, 0);
    }

    #[test]
    fn decoded_layout_round_trips_as_assumptions() {
        let inst = Instance::builder(grid(2, 3)).adjacency(0, 5).separation(1, 2).build().unwrap();
        let (f, vm) = encode_feasibility(&inst, &EncodingConfig::default());
        let mut s = Solver::from_formula(&f, SolverConfig::default());
        let out = s.solve(&[]);
        let layout = decode_model(out.model.unwrap().values(), &vm).unwrap();
        assert!(inst.validate_layout(&layout).is_empty());
        let mut fresh = Solver::from_formula(&f, SolverConfig::default());
        for l in vm.layout_literals(&layout) {
            fresh.add_clause(&[l]).unwrap();
        }
        assert_eq!(fresh.solve(&[]).status, SolveStatus::Sat);
    }
}
