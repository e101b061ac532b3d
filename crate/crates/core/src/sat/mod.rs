//! CDCL SAT kernel: two-watched-literal propagation, first-UIP learning,
//! EVSIDS branching with phase saving, Luby restarts and LBD-based clause
//! database reduction.

mod cnf;
mod lit;
mod luby;
mod solver;
mod vsids;

pub use cnf::CnfFormula;
pub use lit::{Lit, Var};
pub use luby::{luby, restart_interval};
pub use solver::{
    Blocking, Clause, ClauseRef, Enumeration, ImmediateConflict, Learned, LevelZeroConflict,
    Model, SolveOutcome, SolveStatus, Solver, SolverConfig, SolverStats,
};
pub use vsids::{Vsids, RESCALE_FACTOR, RESCALE_THRESHOLD};
