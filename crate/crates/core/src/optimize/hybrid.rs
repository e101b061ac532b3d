use super::{branch_and_bound, BnbConfig, OptStatus, OptimizeResult};
use crate::clock::{Clock, Deadline};
use crate::encode::{decode_model, encode_feasibility, EncodingConfig};
use crate::layout::Instance;
use crate::sat::{Blocking, SolveStatus, Solver, SolverConfig};

/// Settings shared by the two hybrids.
///
/// `solver.time_limit` bounds the feasibility solve of the warm start and
/// `bnb.budget.time_limit` the whole run, hint included. Deep enumeration
/// is bounded by `bnb.budget.time_limit` when set, else by
/// `solver.time_limit`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HybridConfig {
    pub encoding: EncodingConfig,
    pub solver: SolverConfig,
    pub bnb: BnbConfig,
}

/// One CDCL solve supplies an incumbent, then branch and bound proves or
/// improves it. UNSAT ends the run as INFEASIBLE without search; a solve
/// that runs out of budget leaves the search to start cold.
pub fn warm_start_optimize(instance: &Instance, config: &HybridConfig, clock: &dyn Clock) -> OptimizeResult {
    let total = Deadline::start(clock, None);
    let (formula, varmap) = encode_feasibility(instance, &config.encoding);
    let mut solver = Solver::from_formula(&formula, config.solver);
    let outcome = solver.solve_with_clock(&[], clock);
    let hint_time = total.elapsed(clock);

    let hint = match (outcome.status, &outcome.model) {
        (SolveStatus::Unsat, _) => {
            return OptimizeResult {
                status: OptStatus::Infeasible,
                runtime: total.elapsed(clock),
                hint_time: Some(hint_time),
                sat_stats: Some(outcome.stats),
                ..OptimizeResult::default()
            };
        }
        (SolveStatus::Sat, Some(model)) => {
            Some(decode_model(model.values(), &varmap).expect("encoding forces exactly one slot per machine"))
        }
        _ => None,
    };

    let mut bnb = config.bnb;
    bnb.budget.time_limit = bnb.budget.time_limit.map(|t| t.saturating_sub(hint_time));
    let mut result = branch_and_bound(instance, hint.as_ref(), &bnb, clock);
    result.hint_time = Some(hint_time);
    result.sat_stats = Some(outcome.stats);
    result.runtime = total.elapsed(clock);
    result
}

/// Enumerates up to `max_samples` layouts and keeps the cheapest (lowest
/// sample index on ties). OPT iff the enumeration exhausted the model space.
pub fn deep_enumeration_optimize(
    instance: &Instance,
    max_samples: usize,
    config: &HybridConfig,
    clock: &dyn Clock,
) -> OptimizeResult {
    assert!(max_samples >= 1, "max_samples must be at least 1");
    let total = Deadline::start(clock, None);
    let (formula, varmap) = encode_feasibility(instance, &config.encoding);
    let mut solver_config: SolverConfig = config.solver;
    if config.bnb.budget.time_limit.is_some() {
        solver_config.time_limit = config.bnb.budget.time_limit;
    }
    let mut solver = Solver::from_formula(&formula, solver_config);
    // every layout sets exactly n primary variables, so blocking the true
    // ones is enough
    let enumeration = solver.enumerate_models_with_clock(max_samples, &varmap.projection(), Blocking::TruePositives, clock);
    let enumeration_time = total.elapsed(clock);

    let mut best = None;
    for values in &enumeration.models {
        let layout = decode_model(values, &varmap).expect("encoding forces exactly one slot per machine");
        let cost = instance.objective_unchecked(&layout);
        if best.as_ref().is_none_or(|&(c, _)| cost < c) {
            best = Some((cost, layout));
        }
    }
    let selection_time = total.elapsed(clock).saturating_sub(enumeration_time);

    let status = match (&best, enumeration.complete) {
        (Some(_), true) => OptStatus::Opt,
        (Some(_), false) => OptStatus::Feasible,
        (None, true) => OptStatus::Infeasible,
        (None, false) => OptStatus::Unknown,
    };
    let (best_objective, best_layout) = match best {
        Some((c, l)) => (Some(c), Some(l)),
        None => (None, None),
    };
    OptimizeResult {
        status,
        best_layout,
        best_objective,
        runtime: total.elapsed(clock),
        enumeration_time: Some(enumeration_time),
        selection_time: Some(selection_time),
        models_enumerated: Some(enumeration.models.len() as u64),
        sat_stats: Some(solver.stats()),
        exhausted: enumeration.exhausted,
        ..OptimizeResult::default()
    }
}
