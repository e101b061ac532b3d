use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use super::cnf::CnfFormula;
use super::lit::{Lit, Var};
use super::luby::restart_interval;
use super::vsids::Vsids;
use crate::clock::{BudgetKind, Clock, Deadline, NullClock};
use crate::rng::SplitMix64;

/// Tuning knobs and budgets for [`Solver`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub decay_factor: f64,
    /// Conflicts per unit of the Luby sequence.
    pub luby_base: u64,
    pub clause_db_reduce_interval: u64,
    /// Learned clauses with LBD at or below this are never deleted.
    pub glue_lbd_keep_threshold: u32,
    pub default_polarity: bool,
    pub seed: u64,
    /// Probability of a uniformly random decision variable. Zero keeps the
    /// decision sequence purely activity driven.
    pub random_branch_freq: f64,
    pub conflict_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            decay_factor: 0.95,
            luby_base: 64,
            clause_db_reduce_interval: 2000,
            glue_lbd_keep_threshold: 2,
            default_polarity: false,
            seed: 0,
            random_branch_freq: 0.0,
            conflict_limit: None,
            time_limit: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Unknown(BudgetKind),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learned_count: u64,
    pub deleted_count: u64,
    pub max_lbd: u32,
}

/// A total assignment, `values[v - 1]` for variable `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn from_values(values: Vec<bool>) -> Model {
        Model { values }
    }

    pub fn value(&self, var: Var) -> bool {
        self.values[var.idx()]
    }

    pub fn lit_is_true(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub model: Option<Model>,
    pub stats: SolverStats,
}

/// Result of [`Solver::enumerate_models`].
#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    /// Projected models, one `bool` per projection variable, in projection order.
    pub models: Vec<Vec<bool>>,
    /// True iff the projected model space was exhausted.
    pub complete: bool,
    pub exhausted: Option<BudgetKind>,
}

/// How a found model is excluded during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Blocking {
    /// Negate the full projected assignment. Always sound.
    Full,
    /// Negate only the projected variables that are true. Sound when no
    /// projected model's true set strictly contains another's, e.g. when
    /// every model sets the same number of projected variables.
    TruePositives,
}

/// Signals that adding a clause made the formula unsatisfiable at level 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImmediateConflict;

impl fmt::Display for ImmediateConflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("clause conflicts with the formula at decision level 0")
    }
}

impl core::error::Error for ImmediateConflict {}

/// Handle to a clause stored in the solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseRef(u32);

impl ClauseRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct Clause {
    lits: Vec<Lit>,
    learned: bool,
    lbd: u32,
    activity: f64,
    deleted: bool,
}

impl Clause {
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn is_learned(&self) -> bool {
        self.learned
    }

    pub fn lbd(&self) -> u32 {
        self.lbd
    }

    pub fn activity(&self) -> f64 {
        self.activity
    }

    pub fn is_deleted(&self) -> bool {
        self.deleted
    }
}

/// A clause produced by conflict analysis. `lits[0]` is the asserting
/// literal; `lits[1]`, when present, is the deepest of the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Learned {
    pub lits: Vec<Lit>,
    pub backjump_level: u32,
    pub lbd: u32,
}

/// The conflict sits at decision level 0: the formula is unsatisfiable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelZeroConflict;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Value {
    Undef,
    True,
    False,
}

#[derive(Clone, Copy, Debug)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

const CLAUSE_RESCALE: f64 = 1e20;
const CLAUSE_DECAY: f64 = 0.999;
const DECISION_TIME_POLL: u64 = 256;

/// Incremental CDCL solver.
pub struct Solver {
    config: SolverConfig,
    num_vars: usize,
    clauses: Vec<Clause>,
    // clauses given to add_clause; models are checked against these
    input_clauses: Vec<u32>,
    // watches[l] lists clauses that watch literal l; visited when l becomes false
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    phase: Vec<Option<bool>>,
    seen: Vec<bool>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    vsids: Vsids,
    clause_inc: f64,
    ok: bool,
    stats: SolverStats,
    restart_count: u64,
    conflicts_since_restart: u64,
    conflicts_since_reduce: u64,
    rng: SplitMix64,
}

impl fmt::Debug for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Solver")
            .field("num_vars", &self.num_vars)
            .field("clauses", &self.clauses.len())
            .field("ok", &self.ok)
            .field("stats", &self.stats)
            .finish()
    }
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverConfig::default())
    }
}

impl Solver {
    /// # Panics
    /// If the decay factor is outside (0, 1) or `luby_base` is zero.
    pub fn new(config: SolverConfig) -> Solver {
        assert!(config.luby_base >= 1, "luby_base must be at least 1");
        let vsids = Vsids::new(config.decay_factor);
        let rng = SplitMix64::new(config.seed);
        Solver {
            config,
            num_vars: 0,
            clauses: Vec::new(),
            input_clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            phase: Vec::new(),
            seen: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            vsids,
            clause_inc: 1.0,
            ok: true,
            stats: SolverStats::default(),
            restart_count: 1,
            conflicts_since_restart: 0,
            conflicts_since_reduce: 0,
            rng,
        }
    }

    /// Loads every clause of `formula`. Returns the solver even if a clause
    /// conflicts; it will then report UNSAT.
    pub fn from_formula(formula: &CnfFormula, config: SolverConfig) -> Solver {
        let mut s = Solver::new(config);
        s.reserve_vars(formula.num_vars() as usize);
        for c in formula.clauses() {
            let _ = s.add_clause(c);
        }
        s
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn config_mut(&mut self) -> &mut SolverConfig {
        &mut self.config
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// False once the formula is known to be unsatisfiable.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn vsids(&self) -> &Vsids {
        &self.vsids
    }

    pub fn vsids_mut(&mut self) -> &mut Vsids {
        &mut self.vsids
    }

    pub fn clause(&self, cref: ClauseRef) -> &Clause {
        &self.clauses[cref.index()]
    }

    /// Live original (non-learned) clauses.
    pub fn num_clauses(&self) -> usize {
        self.clauses
            .iter()
            .filter(|c| !c.learned && !c.deleted)
            .count()
    }

    pub fn num_learned(&self) -> usize {
        self.clauses
            .iter()
            .filter(|c| c.learned && !c.deleted)
            .count()
    }

    /// Iterates over live original clauses.
    pub fn original_clauses(&self) -> impl Iterator<Item = &[Lit]> {
        self.clauses
            .iter()
            .filter(|c| !c.learned && !c.deleted)
            .map(|c| c.lits.as_slice())
    }

    pub fn new_var(&mut self) -> Var {
        self.reserve_vars(self.num_vars + 1);
        Var::from_idx(self.num_vars - 1)
    }

    pub fn reserve_vars(&mut self, n: usize) {
        if n <= self.num_vars {
            return;
        }
        self.num_vars = n;
        self.watches.resize_with(2 * n, Vec::new);
        self.assigns.resize(n, Value::Undef);
        self.level.resize(n, 0);
        self.reason.resize(n, None);
        self.phase.resize(n, None);
        self.seen.resize(n, false);
        self.vsids.grow_to(n);
    }

    pub fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Current value of a literal, `None` if unassigned.
    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        match self.value(lit) {
            Value::Undef => None,
            Value::True => Some(true),
            Value::False => Some(false),
        }
    }

    pub fn var_level(&self, var: Var) -> Option<u32> {
        match self.assigns[var.idx()] {
            Value::Undef => None,
            _ => Some(self.level[var.idx()]),
        }
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    pub fn saved_phase(&self, var: Var) -> Option<bool> {
        self.phase[var.idx()]
    }

    #[inline]
    fn value(&self, lit: Lit) -> Value {
        match self.assigns[lit.var().idx()] {
            Value::Undef => Value::Undef,
            Value::True if lit.is_positive() => Value::True,
            Value::False if !lit.is_positive() => Value::True,
            _ => Value::False,
        }
    }

    /// Adds an original clause at decision level 0.
    ///
    /// Duplicate literals are dropped and tautologies are ignored. An empty
    /// clause, or one falsified at level 0, makes the solver permanently
    /// UNSAT and returns [`ImmediateConflict`].
    pub fn add_clause(&mut self, lits: &[Lit]) -> Result<(), ImmediateConflict> {
        self.cancel_until(0);
        if !self.ok {
            return Err(ImmediateConflict);
        }
        let mut lits = lits.to_vec();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[1] == !w[0]) {
            return Ok(());
        }
        if let Some(max) = lits.iter().map(|l| l.var().index()).max() {
            self.reserve_vars(max as usize);
        }
        // non-false literals first, true ones ahead of unassigned
        lits.sort_by_key(|&l| match self.value(l) {
            Value::True => 0u8,
            Value::Undef => 1,
            Value::False => 2,
        });
        let live = lits
            .iter()
            .take_while(|&&l| self.value(l) != Value::False)
            .count();
        if live == 0 {
            self.ok = false;
            if !lits.is_empty() {
                let cref = self.push_clause(lits, false, 0);
                self.input_clauses.push(cref);
            }
            return Err(ImmediateConflict);
        }
        let first = lits[0];
        let cref = self.push_clause(lits, false, 0);
        self.input_clauses.push(cref);
        if live == 1 && self.value(first) == Value::Undef {
            let reason = if self.clauses[cref as usize].lits.len() >= 2 {
                Some(cref)
            } else {
                None
            };
            self.enqueue(first, reason);
            if self.propagate_internal().is_some() {
                self.ok = false;
                return Err(ImmediateConflict);
            }
        }
        Ok(())
    }

    fn push_clause(&mut self, lits: Vec<Lit>, learned: bool, lbd: u32) -> u32 {
        let cref = self.clauses.len() as u32;
        if lits.len() >= 2 {
            self.watches[lits[0].code()].push(Watcher {
                cref,
                blocker: lits[1],
            });
            self.watches[lits[1].code()].push(Watcher {
                cref,
                blocker: lits[0],
            });
        }
        self.clauses.push(Clause {
            lits,
            learned,
            lbd,
            activity: 0.0,
            deleted: false,
        });
        cref
    }

    fn enqueue(&mut self, lit: Lit, reason: Option<u32>) {
        let v = lit.var().idx();
        debug_assert_eq!(self.assigns[v], Value::Undef);
        self.assigns[v] = if lit.is_positive() {
            Value::True
        } else {
            Value::False
        };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    /// Opens a new decision level and assigns `lit` as its decision.
    ///
    /// # Panics
    /// If `lit` is already assigned.
    pub fn decide(&mut self, lit: Lit) {
        assert_eq!(self.value(lit), Value::Undef, "decision on assigned literal");
        self.trail_lim.push(self.trail.len());
        self.enqueue(lit, None);
    }

    /// Undoes every assignment above `level`, saving phases.
    pub fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for i in (keep..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var().idx();
            self.phase[v] = Some(lit.is_positive());
            self.assigns[v] = Value::Undef;
            self.reason[v] = None;
            self.vsids.insert(lit.var());
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level as usize);
        self.qhead = keep;
    }

    /// Runs unit propagation to fixpoint. Returns the first falsified clause.
    pub fn propagate(&mut self) -> Option<ClauseRef> {
        self.propagate_internal().map(ClauseRef)
    }

    fn propagate_internal(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = core::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == Value::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                let kept = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && self.value(first) == Value::True {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != Value::False {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l.code()].push(kept);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = kept;
                j += 1;
                if self.value(first) == Value::False {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    /// First-UIP conflict analysis. Bumps the activity of every variable
    /// met during resolution and then decays (grows the increment).
    ///
    /// Does not backjump; see [`Solver::learn`].
    pub fn analyze_conflict(&mut self, conflict: ClauseRef) -> Result<Learned, LevelZeroConflict> {
        if self.decision_level() == 0 {
            return Err(LevelZeroConflict);
        }
        let current = self.decision_level();
        let mut learnt: Vec<Lit> = vec![Lit::new(Var::new(1), true)];
        let mut bumped: Vec<Var> = Vec::new();
        let mut path = 0usize;
        let mut idx = self.trail.len();
        let mut confl = conflict.0 as usize;
        let mut asserting: Option<Lit> = None;
        loop {
            if self.clauses[confl].learned {
                self.bump_clause(confl);
            }
            let skip = usize::from(asserting.is_some());
            for k in skip..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[k];
                let v = q.var().idx();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    bumped.push(q.var());
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().idx()] {
                    break;
                }
            }
            let p = self.trail[idx];
            self.seen[p.var().idx()] = false;
            path -= 1;
            asserting = Some(p);
            if path == 0 {
                break;
            }
            confl = self.reason[p.var().idx()].expect("implied literal without reason") as usize;
        }
        learnt[0] = !asserting.unwrap();
        for v in &bumped {
            self.seen[v.idx()] = false;
        }
        self.vsids.bump_and_decay(&bumped);

        let backjump_level = if learnt.len() == 1 {
            0
        } else {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var().idx()] > self.level[learnt[best].var().idx()] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            self.level[learnt[1].var().idx()]
        };
        let mut levels: Vec<u32> = learnt.iter().map(|l| self.level[l.var().idx()]).collect();
        levels.sort_unstable();
        levels.dedup();
        Ok(Learned {
            lits: learnt,
            backjump_level,
            lbd: levels.len() as u32,
        })
    }

    /// Backjumps, stores the learned clause and asserts its first literal.
    pub fn learn(&mut self, learned: Learned) {
        self.cancel_until(learned.backjump_level);
        self.stats.learned_count += 1;
        self.stats.max_lbd = self.stats.max_lbd.max(learned.lbd);
        let asserting = learned.lits[0];
        if learned.lits.len() == 1 {
            self.enqueue(asserting, None);
        } else {
            let cref = self.push_clause(learned.lits, true, learned.lbd.max(1));
            self.bump_clause(cref as usize);
            self.enqueue(asserting, Some(cref));
        }
    }

    fn bump_clause(&mut self, cref: usize) {
        self.clauses[cref].activity += self.clause_inc;
        if self.clauses[cref].activity > CLAUSE_RESCALE {
            for c in self.clauses.iter_mut().filter(|c| c.learned) {
                c.activity /= CLAUSE_RESCALE;
            }
            self.clause_inc /= CLAUSE_RESCALE;
        }
    }

    /// The next decision literal: the unassigned variable of highest
    /// activity (lowest index on ties) with its saved phase, or
    /// `default_polarity` if it was never assigned. `None` when every
    /// variable is assigned.
    pub fn pick_branch(&mut self) -> Option<Lit> {
        if self.config.random_branch_freq > 0.0
            && self.num_vars > 0
            && self.rng.next_f64() < self.config.random_branch_freq
        {
            let v = self.rng.below(self.num_vars as u64) as usize;
            if self.assigns[v] == Value::Undef {
                return Some(self.polarized(Var::from_idx(v)));
            }
        }
        while let Some(v) = self.vsids.pop_max() {
            if self.assigns[v.idx()] == Value::Undef {
                return Some(self.polarized(v));
            }
        }
        None
    }

    fn polarized(&self, v: Var) -> Lit {
        Lit::new(v, self.phase[v.idx()].unwrap_or(self.config.default_polarity))
    }

    fn locked(&self, cref: usize) -> bool {
        let c = &self.clauses[cref];
        let v = c.lits[0].var().idx();
        self.reason[v] == Some(cref as u32) && self.value(c.lits[0]) == Value::True
    }

    /// Deletes the worse half of the deletable learned clauses: those with
    /// LBD above the glue threshold that are not the reason for a current
    /// assignment. Worse means higher LBD, then lower activity.
    pub fn reduce_clause_db(&mut self) -> usize {
        let glue = self.config.glue_lbd_keep_threshold;
        let mut candidates: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| {
                let c = &self.clauses[i];
                c.learned && !c.deleted && c.lbd > glue && !self.locked(i)
            })
            .collect();
        candidates.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a], &self.clauses[b]);
            cb.lbd
                .cmp(&ca.lbd)
                .then(ca.activity.total_cmp(&cb.activity))
                .then(a.cmp(&b))
        });
        let n = candidates.len() / 2;
        if n == 0 {
            return 0;
        }
        for &i in &candidates[..n] {
            self.clauses[i].deleted = true;
            self.clauses[i].lits = Vec::new();
        }
        let clauses = &self.clauses;
        for ws in &mut self.watches {
            ws.retain(|w| !clauses[w.cref as usize].deleted);
        }
        self.stats.deleted_count += n as u64;
        n
    }

    /// Solves under optional assumptions. Learned clauses persist across
    /// calls. UNSAT under assumptions does not poison later calls.
    ///
    /// `time_limit` is ignored here; see [`Solver::solve_with_clock`].
    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveOutcome {
        self.solve_with_clock(assumptions, &NullClock)
    }

    /// [`Solver::solve`] with `time_limit` measured on `clock`.
    pub fn solve_with_clock(&mut self, assumptions: &[Lit], clock: &dyn Clock) -> SolveOutcome {
        let deadline = Deadline::start(clock, self.config.time_limit);
        let status = self.run(assumptions, &deadline, self.stats.conflicts, clock);
        let model = if status == SolveStatus::Sat {
            Some(self.extract_model())
        } else {
            None
        };
        self.cancel_until(0);
        SolveOutcome {
            status,
            model,
            stats: self.stats,
        }
    }

    fn run(&mut self, assumptions: &[Lit], deadline: &Deadline, conflicts_at_start: u64, clock: &dyn Clock) -> SolveStatus {
        if !self.ok {
            return SolveStatus::Unsat;
        }
        if let Some(max) = assumptions.iter().map(|l| l.var().index()).max() {
            self.reserve_vars(max as usize);
        }
        self.search(assumptions, deadline, conflicts_at_start, clock)
    }

    fn extract_model(&self) -> Model {
        let values: Vec<bool> = self.assigns.iter().map(|&a| a == Value::True).collect();
        debug_assert!(self.assigns.iter().all(|&a| a != Value::Undef));
        let model = Model { values };
        for c in self.input_clauses.iter().map(|&cref| &self.clauses[cref as usize]) {
            assert!(
                c.lits.iter().any(|&l| model.lit_is_true(l)),
                "solver produced a model violating an original clause"
            );
        }
        model
    }

    fn search(&mut self, assumptions: &[Lit], deadline: &Deadline, conflicts_at_start: u64, clock: &dyn Clock) -> SolveStatus {
        let mut decisions_since_poll = 0u64;
        loop {
            if let Some(confl) = self.propagate_internal() {
                self.stats.conflicts += 1;
                self.conflicts_since_restart += 1;
                self.conflicts_since_reduce += 1;
                let learned = match self.analyze_conflict(ClauseRef(confl)) {
                    Ok(l) => l,
                    Err(LevelZeroConflict) => {
                        self.ok = false;
                        return SolveStatus::Unsat;
                    }
                };
                self.learn(learned);
                self.clause_inc /= CLAUSE_DECAY;
                if let Some(limit) = self.config.conflict_limit {
                    if self.stats.conflicts - conflicts_at_start >= limit {
                        return SolveStatus::Unknown(BudgetKind::Conflicts);
                    }
                }
                if deadline.expired(clock) {
                    return SolveStatus::Unknown(BudgetKind::Time);
                }
                if self.conflicts_since_reduce >= self.config.clause_db_reduce_interval {
                    self.conflicts_since_reduce = 0;
                    self.reduce_clause_db();
                }
            } else {
                if self.conflicts_since_restart
                    >= restart_interval(self.restart_count, self.config.luby_base)
                {
                    self.stats.restarts += 1;
                    self.restart_count += 1;
                    self.conflicts_since_restart = 0;
                    self.cancel_until(0);
                }
                decisions_since_poll += 1;
                if decisions_since_poll >= DECISION_TIME_POLL {
                    decisions_since_poll = 0;
                    if deadline.expired(clock) {
                        return SolveStatus::Unknown(BudgetKind::Time);
                    }
                }
                let level = self.decision_level() as usize;
                let next = if level < assumptions.len() {
                    let a = assumptions[level];
                    match self.value(a) {
                        Value::True => {
                            self.trail_lim.push(self.trail.len());
                            continue;
                        }
                        Value::False => return SolveStatus::Unsat,
                        Value::Undef => a,
                    }
                } else {
                    match self.pick_branch() {
                        Some(l) => {
                            self.stats.decisions += 1;
                            l
                        }
                        None => return SolveStatus::Sat,
                    }
                };
                self.decide(next);
            }
        }
    }

    /// Adds a clause that is falsified by the current (complete) assignment,
    /// backjumping just far enough for it to become unit or unassigned.
    /// Returns false if the formula became UNSAT.
    fn add_blocking_clause(&mut self, mut lits: Vec<Lit>) -> bool {
        lits.sort_unstable();
        lits.dedup();
        if lits.is_empty() {
            self.ok = false;
            return false;
        }
        lits.sort_by_key(|&l| core::cmp::Reverse(self.level[l.var().idx()]));
        let top = self.level[lits[0].var().idx()];
        if top == 0 {
            self.ok = false;
            self.cancel_until(0);
            return false;
        }
        if lits.len() == 1 {
            self.cancel_until(0);
            self.push_clause(lits.clone(), false, 0);
            self.enqueue(lits[0], None);
            return true;
        }
        let second = self.level[lits[1].var().idx()];
        if second == top {
            self.cancel_until(top - 1);
            self.push_clause(lits, false, 0);
        } else {
            self.cancel_until(second);
            let first = lits[0];
            let cref = self.push_clause(lits, false, 0);
            self.enqueue(first, Some(cref));
        }
        true
    }

    /// Enumerates up to `max_models` models that differ on `projection`,
    /// adding a blocking clause after each. Blocking clauses stay in the
    /// formula afterwards.
    pub fn enumerate_models(&mut self, max_models: usize, projection: &[Var], blocking: Blocking) -> Enumeration {
        self.enumerate_models_with_clock(max_models, projection, blocking, &NullClock)
    }

    /// [`Solver::enumerate_models`] with `time_limit` measured on `clock`.
    pub fn enumerate_models_with_clock(
        &mut self,
        max_models: usize,
        projection: &[Var],
        blocking: Blocking,
        clock: &dyn Clock,
    ) -> Enumeration {
        self.cancel_until(0);
        if let Some(max) = projection.iter().map(|v| v.index()).max() {
            self.reserve_vars(max as usize);
        }
        let deadline = Deadline::start(clock, self.config.time_limit);
        let conflicts_at_start = self.stats.conflicts;
        let mut models = Vec::new();
        let mut complete = false;
        let mut exhausted = None;
        loop {
            if models.len() >= max_models {
                break;
            }
            match self.run(&[], &deadline, conflicts_at_start, clock) {
                SolveStatus::Sat => {
                    let model = self.extract_model();
                    let projected: Vec<bool> = projection.iter().map(|&v| model.value(v)).collect();
                    let block: Vec<Lit> = projection
                        .iter()
                        .zip(&projected)
                        .filter(|(_, &val)| blocking == Blocking::Full || val)
                        .map(|(&v, &val)| Lit::new(v, !val))
                        .collect();
                    models.push(projected);
                    if !self.add_blocking_clause(block) {
                        complete = true;
                        break;
                    }
                }
                SolveStatus::Unsat => {
                    complete = true;
                    break;
                }
                SolveStatus::Unknown(kind) => {
                    exhausted = Some(kind);
                    break;
                }
            }
        }
        self.cancel_until(0);
        Enumeration {
            models,
            complete,
            exhausted,
        }
    }
}
