//! JSON rendering of a single optimization run.

use serde::Serialize;
use slotsat_core::clock::BudgetKind;
use slotsat_core::optimize::OptimizeResult;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizeRecord {
    pub mode: String,
    pub status: &'static str,
    pub objective: Option<u64>,
    /// Slot of each machine.
    pub layout: Option<Vec<usize>>,
    pub runtime_seconds: f64,
    pub nodes_explored: u64,
    pub nodes_pruned: u64,
    pub hint_cost: Option<u64>,
    pub hint_seconds: Option<f64>,
    pub enumeration_seconds: Option<f64>,
    pub selection_seconds: Option<f64>,
    pub models_enumerated: Option<u64>,
    pub conflicts: Option<u64>,
    pub decisions: Option<u64>,
    pub propagations: Option<u64>,
    pub restarts: Option<u64>,
    pub learned: Option<u64>,
    pub budget_exhausted: Option<&'static str>,
}

pub fn budget_name(kind: BudgetKind) -> &'static str {
    match kind {
        BudgetKind::Time => "time",
        BudgetKind::Conflicts => "conflicts",
        BudgetKind::Nodes => "nodes",
    }
}

impl OptimizeRecord {
    pub fn new(mode: &str, r: &OptimizeResult) -> OptimizeRecord {
        let stats = r.sat_stats;
        OptimizeRecord {
            mode: mode.to_string(),
            status: r.status.as_str(),
            objective: r.best_objective,
            layout: r.best_layout.as_ref().map(|l| l.slot_of.clone()),
            runtime_seconds: r.runtime.as_secs_f64(),
            nodes_explored: r.nodes_explored,
            nodes_pruned: r.nodes_pruned,
            hint_cost: r.hint_cost,
            hint_seconds: r.hint_time.map(|d| d.as_secs_f64()),
            enumeration_seconds: r.enumeration_time.map(|d| d.as_secs_f64()),
            selection_seconds: r.selection_time.map(|d| d.as_secs_f64()),
            models_enumerated: r.models_enumerated,
            conflicts: stats.map(|s| s.conflicts),
            decisions: stats.map(|s| s.decisions),
            propagations: stats.map(|s| s.propagations),
            restarts: stats.map(|s| s.restarts),
            learned: stats.map(|s| s.learned_count),
            budget_exhausted: r.exhausted.map(budget_name),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}
