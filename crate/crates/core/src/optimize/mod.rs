//! Exact minimization of the weighted Manhattan objective.
//!
//! [`branch_and_bound`] is a depth-first search over machine placements.
//! The two hybrids feed it from the SAT kernel: [`warm_start_optimize`]
//! seeds the incumbent with one SAT model, [`deep_enumeration_optimize`]
//! enumerates a pool of models and keeps the cheapest. [`brute_force_oracle`]
//! checks all of them on small grids.

mod bnb;
mod hybrid;
mod oracle;

use core::time::Duration;

pub use bnb::{branch_and_bound, lower_bound, BnbConfig, BoundMode};
pub use hybrid::{deep_enumeration_optimize, warm_start_optimize, HybridConfig};
pub use oracle::{brute_force_oracle, count_feasible_layouts, feasible_layouts, OracleError, ORACLE_MAX_SLOTS};

use crate::clock::BudgetKind;
use crate::layout::Layout;
use crate::sat::SolverStats;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OptStatus {
    /// Optimality proven.
    Opt,
    /// A feasible layout is known but the budget ran out before the proof.
    Feasible,
    Infeasible,
    /// Budget ran out with no feasible layout.
    #[default]
    Unknown,
}

impl OptStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            OptStatus::Opt => "OPT",
            OptStatus::Feasible => "FEASIBLE",
            OptStatus::Infeasible => "INFEASIBLE",
            OptStatus::Unknown => "UNKNOWN",
        }
    }

    pub fn is_feasible(self) -> bool {
        matches!(self, OptStatus::Opt | OptStatus::Feasible)
    }
}

/// Limits for one optimization run. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OptimizeResult {
    pub status: OptStatus,
    pub best_layout: Option<Layout>,
    pub best_objective: Option<u64>,
    pub nodes_explored: u64,
    pub nodes_pruned: u64,
    pub runtime: Duration,
    /// Objective of the warm-start hint, when one was used.
    pub hint_cost: Option<u64>,
    pub hint_time: Option<Duration>,
    pub enumeration_time: Option<Duration>,
    pub selection_time: Option<Duration>,
    pub models_enumerated: Option<u64>,
    pub sat_stats: Option<SolverStats>,
    pub exhausted: Option<BudgetKind>,
}
