use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use slotsat_core::clock::Clock;
use slotsat_core::encode::{decode_model, encode_feasibility, EncodingConfig, SymmetryMode};
use slotsat_core::generator::{experiment_matrix, generate, ExperimentKind, GeneratorSpec};
use slotsat_core::layout::Instance;
use slotsat_core::optimize::{
    branch_and_bound, brute_force_oracle, deep_enumeration_optimize, warm_start_optimize,
    BnbConfig, Budget, HybridConfig, OptimizeResult, ORACLE_MAX_SLOTS,
};
use slotsat_core::sat::{SolveStatus, Solver, SolverConfig};

use super::record::{BenchRecord, Method, RunStatus};
use crate::instance_io::{instance_from_json, instance_to_json};
use crate::StdClock;

/// Per-run limits. Feasibility runs get `feas_timeout`, optimization runs
/// `opt_timeout`. The optional conflict and node limits make budgeted runs
/// reproducible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteBudgets {
    pub feas_timeout: Duration,
    pub opt_timeout: Duration,
    pub conflict_limit: Option<u64>,
    pub node_limit: Option<u64>,
}

impl Default for SuiteBudgets {
    fn default() -> Self {
        SuiteBudgets {
            feas_timeout: Duration::from_secs(10),
            opt_timeout: Duration::from_secs(60),
            conflict_limit: None,
            node_limit: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    pub budgets: SuiteBudgets,
    /// Adds a brute-force ORACLE record for every instance small enough.
    pub include_oracle: bool,
    pub max_samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            budgets: SuiteBudgets::default(),
            include_oracle: false,
            max_samples: 75_000,
        }
    }
}

/// Parses `a..b` (inclusive), `a..=b`, or a comma list such as `1,4,9`.
pub fn parse_seeds(s: &str) -> Option<Vec<u64>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b): (u64, u64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (a <= b).then(|| (a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Methods (with the symmetry mode each runs under) for one experiment.
pub fn methods_for(kind: ExperimentKind) -> Vec<(Method, SymmetryMode)> {
    let plain = |m| (m, SymmetryMode::None);
    match kind {
        ExperimentKind::Scaling | ExperimentKind::Density | ExperimentKind::Optimization => {
            vec![plain(Method::CdclFeas), plain(Method::BnbCold)]
        }
        ExperimentKind::Symmetry => [Method::CdclFeas, Method::BnbCold]
            .into_iter()
            .flat_map(|m| {
                [
                    SymmetryMode::None,
                    SymmetryMode::FixFirst,
                    SymmetryMode::Orbit,
                ]
                .map(|s| (m, s))
            })
            .collect(),
        ExperimentKind::Hybrids => vec![
            plain(Method::BnbCold),
            plain(Method::BnbWarm),
            plain(Method::EnumHybrid),
        ],
    }
}

fn is_optimization(kind: ExperimentKind) -> bool {
    matches!(kind, ExperimentKind::Optimization | ExperimentKind::Hybrids)
}

fn fill_from_optimize(rec: &mut BenchRecord, r: &OptimizeResult, instance: &Instance) {
    if r.best_layout
        .as_ref()
        .is_some_and(|l| !instance.is_feasible(l))
    {
        rec.note = "returned layout violates constraints".into();
    }
    rec.status = r.status.into();
    rec.objective = r.best_objective;
    rec.nodes_explored = Some(r.nodes_explored);
    rec.nodes_pruned = Some(r.nodes_pruned);
    rec.hint_cost = r.hint_cost;
    rec.models_enumerated = r.models_enumerated;
    if let Some(s) = r.sat_stats {
        rec.conflicts = Some(s.conflicts);
        rec.decisions = Some(s.decisions);
        rec.propagations = Some(s.propagations);
        rec.restarts = Some(s.restarts);
        rec.learned = Some(s.learned_count);
    }
}

/// Runs one method on one instance. Panics inside the method become an
/// UNKNOWN record carrying the panic message.
pub fn run_method(
    instance: &Instance,
    method: Method,
    encoding: EncodingConfig,
    experiment: ExperimentKind,
    options: &SuiteOptions,
) -> BenchRecord {
    let meta = instance.meta();
    let grid = instance.grid();
    let mut rec = BenchRecord::blank(
        experiment,
        method,
        grid.rows(),
        grid.cols(),
        meta.structure,
        meta.rho_hard,
        meta.rho_soft,
        meta.seed,
    );
    rec.symmetry_mode = encoding.symmetry;
    rec.amo_mode = encoding.amo;
    rec.adjacency_mode = encoding.adjacency;
    let budgets = options.budgets;
    let time_limit = if is_optimization(experiment) && method != Method::CdclFeas {
        budgets.opt_timeout
    } else {
        budgets.feas_timeout
    };
    let clock = StdClock::new();
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let mut rec = rec.clone();
        let solver = SolverConfig {
            time_limit: Some(budgets.feas_timeout),
            conflict_limit: budgets.conflict_limit,
            ..SolverConfig::default()
        };
        let bnb = BnbConfig {
            symmetry: encoding.symmetry,
            budget: Budget {
                time_limit: Some(time_limit),
                node_limit: budgets.node_limit,
            },
            ..BnbConfig::default()
        };
        let hybrid = HybridConfig {
            encoding,
            solver,
            bnb,
        };
        match method {
            Method::CdclFeas => {
                let (formula, varmap) = encode_feasibility(instance, &encoding);
                let mut s = Solver::from_formula(&formula, solver);
                let out = s.solve_with_clock(&[], &clock);
                rec.status = out.status.into();
                let st = out.stats;
                rec.conflicts = Some(st.conflicts);
                rec.decisions = Some(st.decisions);
                rec.propagations = Some(st.propagations);
                rec.restarts = Some(st.restarts);
                rec.learned = Some(st.learned_count);
                if out.status == SolveStatus::Sat {
                    let model = out.model.expect("SAT outcome carries a model");
                    match decode_model(model.values(), &varmap) {
                        Ok(layout) if instance.is_feasible(&layout) => {}
                        Ok(_) => rec.note = "decoded layout violates constraints".into(),
                        Err(e) => rec.note = e.to_string(),
                    }
                }
            }
            Method::BnbCold => fill_from_optimize(
                &mut rec,
                &branch_and_bound(instance, None, &bnb, &clock),
                instance,
            ),
            Method::BnbWarm => {
                let r = warm_start_optimize(instance, &hybrid, &clock);
                fill_from_optimize(&mut rec, &r, instance);
                rec.phase_seconds = r.hint_time.map(|d| d.as_secs_f64());
            }
            Method::EnumHybrid => {
                let r = deep_enumeration_optimize(instance, options.max_samples, &hybrid, &clock);
                fill_from_optimize(&mut rec, &r, instance);
                rec.nodes_explored = None;
                rec.nodes_pruned = None;
                rec.phase_seconds = r.enumeration_time.map(|d| d.as_secs_f64());
            }
            Method::Oracle => match brute_force_oracle(instance) {
                Ok(r) => {
                    fill_from_optimize(&mut rec, &r, instance);
                    rec.nodes_pruned = None;
                }
                Err(e) => rec.note = e.to_string(),
            },
        }
        rec
    }));
    let elapsed = clock.now().as_secs_f64();
    let mut rec = match outcome {
        Ok(r) => r,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            rec.status = RunStatus::Unknown;
            rec.note = format!("crashed: {msg}");
            rec
        }
    };
    rec.runtime_seconds = elapsed;
    rec
}

/// Generates every instance of the experiment for `seeds` and runs each
/// method on it, returning records in canonical order. Each method gets its
/// own copy of the instance read back from its JSON serialization.
pub fn run_suite(kind: ExperimentKind, seeds: &[u64], options: &SuiteOptions) -> Vec<BenchRecord> {
    let mut records = Vec::new();
    for spec in experiment_matrix(kind, seeds) {
        records.extend(run_instance(kind, &spec, options));
    }
    records.sort_by(|a, b| a.canonical_cmp(b));
    records
}

fn run_instance(
    kind: ExperimentKind,
    spec: &GeneratorSpec,
    options: &SuiteOptions,
) -> Vec<BenchRecord> {
    let generated = match generate(spec) {
        Ok(inst) => inst,
        Err(e) => {
            let mut rec = BenchRecord::blank(
                kind,
                Method::CdclFeas,
                spec.rows,
                spec.cols,
                spec.structure,
                spec.rho_hard,
                spec.rho_soft,
                spec.seed,
            );
            rec.note = format!("generation failed: {e}");
            return vec![rec];
        }
    };
    let serialized = instance_to_json(&generated);
    let mut methods = methods_for(kind);
    if options.include_oracle && generated.grid().num_unblocked() <= ORACLE_MAX_SLOTS {
        methods.push((Method::Oracle, SymmetryMode::None));
    }
    methods
        .into_iter()
        .map(|(method, symmetry)| {
            let instance = instance_from_json(&serialized).expect("serialized instance reloads");
            let encoding = EncodingConfig {
                symmetry,
                ..EncodingConfig::default()
            };
            run_method(&instance, method, encoding, kind, options)
        })
        .collect()
}
