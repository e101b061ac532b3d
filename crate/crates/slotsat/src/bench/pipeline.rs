use std::fmt;

use slotsat_core::encode::{decode_model, encode_feasibility, EncodingConfig, SymmetryMode};
use slotsat_core::layout::{Grid, Instance, Layout};
use slotsat_core::optimize::{
    branch_and_bound, brute_force_oracle, deep_enumeration_optimize, warm_start_optimize,
    BnbConfig, HybridConfig, OptimizeResult,
};
use slotsat_core::sat::{Solver, SolverConfig};

use super::record::{Method, RunStatus};
use crate::StdClock;

/// Five machines on a 1×5 line, machines 0 and 1 adjacent, 2 and 3 apart.
pub fn validation_instance() -> Instance {
    Instance::builder(Grid::new(1, 5).expect("nonempty grid"))
        .adjacency(0, 1)
        .separation(2, 3)
        .build()
        .expect("valid instance")
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineCheck {
    pub method: Method,
    /// Encoding used, for SAT-based methods.
    pub encoding: Option<EncodingConfig>,
    pub status: RunStatus,
    pub layout_valid: Option<bool>,
    /// FIX_FIRST may legitimately disagree; its result is recorded only.
    pub required: bool,
}

impl PipelineCheck {
    pub fn passed(&self) -> bool {
        self.status.feasibility() == Some(true) && self.layout_valid == Some(true)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub checks: Vec<PipelineCheck>,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.required)
            .all(PipelineCheck::passed)
    }
}

impl fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let enc = c
                .encoding
                .map(|e| {
                    format!(
                        " [{} {} {}]",
                        e.amo.as_str(),
                        e.adjacency.as_str(),
                        e.symmetry.as_str()
                    )
                })
                .unwrap_or_default();
            let verdict = match (c.passed(), c.required) {
                (true, _) => "ok",
                (false, true) => "FAIL",
                (false, false) => "differs (not required)",
            };
            writeln!(
                f,
                "{}{enc}: {} -> {verdict}",
                c.method.as_str(),
                c.status.as_str()
            )?;
        }
        write!(
            f,
            "pipeline {}",
            if self.passed() { "PASSED" } else { "FAILED" }
        )
    }
}

/// Runs the validation instance through every method and encoding and
/// checks that all agree it is feasible with valid layouts.
pub fn validate_pipeline() -> PipelineReport {
    let instance = validation_instance();
    let clock = StdClock::new();
    let valid = |l: Option<&Layout>| Some(l.is_some_and(|l| instance.is_feasible(l)));
    let mut checks = Vec::new();
    for base in EncodingConfig::all_modes() {
        for symmetry in [
            SymmetryMode::None,
            SymmetryMode::Orbit,
            SymmetryMode::FixFirst,
        ] {
            let encoding = EncodingConfig { symmetry, ..base };
            let (formula, varmap) = encode_feasibility(&instance, &encoding);
            let out = Solver::from_formula(&formula, SolverConfig::default())
                .solve_with_clock(&[], &clock);
            let layout = out
                .model
                .as_ref()
                .and_then(|m| decode_model(m.values(), &varmap).ok());
            checks.push(PipelineCheck {
                method: Method::CdclFeas,
                encoding: Some(encoding),
                status: out.status.into(),
                layout_valid: valid(layout.as_ref()),
                required: symmetry != SymmetryMode::FixFirst,
            });
        }
    }
    let hybrid = HybridConfig::default();
    let runs: [(Method, OptimizeResult); 4] = [
        (
            Method::BnbCold,
            branch_and_bound(&instance, None, &BnbConfig::default(), &clock),
        ),
        (
            Method::BnbWarm,
            warm_start_optimize(&instance, &hybrid, &clock),
        ),
        (
            Method::EnumHybrid,
            deep_enumeration_optimize(&instance, 1000, &hybrid, &clock),
        ),
        (
            Method::Oracle,
            brute_force_oracle(&instance).expect("five slots"),
        ),
    ];
    for (method, r) in runs {
        checks.push(PipelineCheck {
            method,
            encoding: matches!(method, Method::BnbWarm | Method::EnumHybrid)
                .then_some(hybrid.encoding),
            status: r.status.into(),
            layout_valid: valid(r.best_layout.as_ref()),
            required: true,
        });
    }
    PipelineReport { checks }
}
