use std::cmp::Ordering;

use slotsat_core::encode::{AdjacencyMode, AmoMode, SymmetryMode};
use slotsat_core::generator::ExperimentKind;
use slotsat_core::layout::Structure;
use slotsat_core::optimize::OptStatus;
use slotsat_core::sat::SolveStatus;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    CdclFeas,
    BnbCold,
    BnbWarm,
    EnumHybrid,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::CdclFeas,
        Method::BnbCold,
        Method::BnbWarm,
        Method::EnumHybrid,
        Method::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::CdclFeas => "CDCL_FEAS",
            Method::BnbCold => "BNB_COLD",
            Method::BnbWarm => "BNB_WARM",
            Method::EnumHybrid => "ENUM_HYBRID",
            Method::Oracle => "ORACLE",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

/// Outcome of one run. Feasibility runs report SAT/UNSAT, optimization
/// runs OPT/FEASIBLE/INFEASIBLE; anything unfinished is UNKNOWN.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RunStatus {
    Sat,
    Unsat,
    Opt,
    Feasible,
    Infeasible,
    Unknown,
}

impl RunStatus {
    pub const ALL: [RunStatus; 6] = [
        RunStatus::Sat,
        RunStatus::Unsat,
        RunStatus::Opt,
        RunStatus::Feasible,
        RunStatus::Infeasible,
        RunStatus::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Sat => "SAT",
            RunStatus::Unsat => "UNSAT",
            RunStatus::Opt => "OPT",
            RunStatus::Feasible => "FEASIBLE",
            RunStatus::Infeasible => "INFEASIBLE",
            RunStatus::Unknown => "UNKNOWN",
        }
    }

    pub fn parse(s: &str) -> Option<RunStatus> {
        RunStatus::ALL.into_iter().find(|m| m.as_str() == s)
    }

    /// `Some(true)` if a feasible layout exists, `Some(false)` if none does,
    /// `None` if the run did not find out.
    pub fn feasibility(self) -> Option<bool> {
        match self {
            RunStatus::Sat | RunStatus::Opt | RunStatus::Feasible => Some(true),
            RunStatus::Unsat | RunStatus::Infeasible => Some(false),
            RunStatus::Unknown => None,
        }
    }
}

impl From<SolveStatus> for RunStatus {
    fn from(s: SolveStatus) -> RunStatus {
        match s {
            SolveStatus::Sat => RunStatus::Sat,
            SolveStatus::Unsat => RunStatus::Unsat,
            SolveStatus::Unknown(_) => RunStatus::Unknown,
        }
    }
}

impl From<OptStatus> for RunStatus {
    fn from(s: OptStatus) -> RunStatus {
        match s {
            OptStatus::Opt => RunStatus::Opt,
            OptStatus::Feasible => RunStatus::Feasible,
            OptStatus::Infeasible => RunStatus::Infeasible,
            OptStatus::Unknown => RunStatus::Unknown,
        }
    }
}

/// One (instance, method, configuration) run.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub experiment: ExperimentKind,
    pub method: Method,
    pub rows: usize,
    pub cols: usize,
    pub structure: Structure,
    pub rho_hard: f64,
    pub rho_soft: f64,
    pub symmetry_mode: SymmetryMode,
    pub amo_mode: AmoMode,
    pub adjacency_mode: AdjacencyMode,
    pub seed: u64,
    pub status: RunStatus,
    pub runtime_seconds: f64,
    pub objective: Option<u64>,
    pub conflicts: Option<u64>,
    pub decisions: Option<u64>,
    pub propagations: Option<u64>,
    pub restarts: Option<u64>,
    pub learned: Option<u64>,
    pub nodes_explored: Option<u64>,
    pub nodes_pruned: Option<u64>,
    pub models_enumerated: Option<u64>,
    pub hint_cost: Option<u64>,
    /// Hint generation time for BNB_WARM, enumeration time for ENUM_HYBRID.
    pub phase_seconds: Option<f64>,
    pub note: String,
}

pub const CSV_HEADER: [&str; 25] = [
    "experiment",
    "method",
    "rows",
    "cols",
    "structure",
    "rho_hard",
    "rho_soft",
    "symmetry_mode",
    "amo_mode",
    "adjacency_mode",
    "seed",
    "status",
    "runtime_seconds",
    "objective",
    "conflicts",
    "decisions",
    "propagations",
    "restarts",
    "learned",
    "nodes_explored",
    "nodes_pruned",
    "models_enumerated",
    "hint_cost",
    "phase_seconds",
    "note",
];

/// Columns that hold wall-clock measurements.
pub const RUNTIME_COLUMNS: [&str; 2] = ["runtime_seconds", "phase_seconds"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecordError {
    #[error("expected {expected} columns, got {0}", expected = CSV_HEADER.len())]
    Width(usize),
    #[error("column `{column}`: cannot parse `{value}`")]
    Value { column: &'static str, value: String },
}

/// `printf("%g")`: six significant digits, trailing zeros dropped,
/// scientific notation outside `[1e-4, 1e6)`.
pub fn format_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    fn trim(s: &str) -> &str {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.')
        } else {
            s
        }
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    }
}

fn opt_u64(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl BenchRecord {
    /// A record with the instance description filled in and everything
    /// else blank.
    #[allow(clippy::too_many_arguments)]
    pub fn blank(
        experiment: ExperimentKind,
        method: Method,
        rows: usize,
        cols: usize,
        structure: Structure,
        rho_hard: f64,
        rho_soft: f64,
        seed: u64,
    ) -> BenchRecord {
        BenchRecord {
            experiment,
            method,
            rows,
            cols,
            structure,
            rho_hard,
            rho_soft,
            symmetry_mode: SymmetryMode::None,
            amo_mode: AmoMode::default(),
            adjacency_mode: AdjacencyMode::default(),
            seed,
            status: RunStatus::Unknown,
            runtime_seconds: 0.0,
            objective: None,
            conflicts: None,
            decisions: None,
            propagations: None,
            restarts: None,
            learned: None,
            nodes_explored: None,
            nodes_pruned: None,
            models_enumerated: None,
            hint_cost: None,
            phase_seconds: None,
            note: String::new(),
        }
    }

    pub fn to_row(&self) -> Vec<String> {
        vec![
            self.experiment.as_str().to_string(),
            self.method.as_str().to_string(),
            self.rows.to_string(),
            self.cols.to_string(),
            self.structure.as_str().to_string(),
            format_g6(self.rho_hard),
            format_g6(self.rho_soft),
            self.symmetry_mode.as_str().to_string(),
            self.amo_mode.as_str().to_string(),
            self.adjacency_mode.as_str().to_string(),
            self.seed.to_string(),
            self.status.as_str().to_string(),
            format_g6(self.runtime_seconds),
            opt_u64(self.objective),
            opt_u64(self.conflicts),
            opt_u64(self.decisions),
            opt_u64(self.propagations),
            opt_u64(self.restarts),
            opt_u64(self.learned),
            opt_u64(self.nodes_explored),
            opt_u64(self.nodes_pruned),
            opt_u64(self.models_enumerated),
            opt_u64(self.hint_cost),
            self.phase_seconds.map(format_g6).unwrap_or_default(),
            self.note.clone(),
        ]
    }

    pub fn from_row<S: AsRef<str>>(row: &[S]) -> Result<BenchRecord, RecordError> {
        if row.len() != CSV_HEADER.len() {
            return Err(RecordError::Width(row.len()));
        }
        let cell = |i: usize| row[i].as_ref();
        let bad = |i: usize| RecordError::Value {
            column: CSV_HEADER[i],
            value: cell(i).to_string(),
        };
        let num = |i: usize| cell(i).parse::<u64>().map_err(|_| bad(i));
        let float = |i: usize| cell(i).parse::<f64>().map_err(|_| bad(i));
        let opt = |i: usize| -> Result<Option<u64>, RecordError> {
            if cell(i).is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        Ok(BenchRecord {
            experiment: ExperimentKind::parse(cell(0)).ok_or_else(|| bad(0))?,
            method: Method::parse(cell(1)).ok_or_else(|| bad(1))?,
            rows: num(2)? as usize,
            cols: num(3)? as usize,
            structure: Structure::parse(cell(4)).ok_or_else(|| bad(4))?,
            rho_hard: float(5)?,
            rho_soft: float(6)?,
            symmetry_mode: SymmetryMode::parse(cell(7)).ok_or_else(|| bad(7))?,
            amo_mode: AmoMode::parse(cell(8)).ok_or_else(|| bad(8))?,
            adjacency_mode: AdjacencyMode::parse(cell(9)).ok_or_else(|| bad(9))?,
            seed: num(10)?,
            status: RunStatus::parse(cell(11)).ok_or_else(|| bad(11))?,
            runtime_seconds: float(12)?,
            objective: opt(13)?,
            conflicts: opt(14)?,
            decisions: opt(15)?,
            propagations: opt(16)?,
            restarts: opt(17)?,
            learned: opt(18)?,
            nodes_explored: opt(19)?,
            nodes_pruned: opt(20)?,
            models_enumerated: opt(21)?,
            hint_cost: opt(22)?,
            phase_seconds: if cell(23).is_empty() {
                None
            } else {
                Some(float(23)?)
            },
            note: cell(24).to_string(),
        })
    }

    /// Canonical output order: by experiment, instance, then configuration.
    pub fn canonical_cmp(&self, other: &BenchRecord) -> Ordering {
        (self.experiment, self.rows, self.cols, self.structure)
            .cmp(&(other.experiment, other.rows, other.cols, other.structure))
            .then(self.rho_hard.total_cmp(&other.rho_hard))
            .then(self.rho_soft.total_cmp(&other.rho_soft))
            .then(self.seed.cmp(&other.seed))
            .then(self.method.cmp(&other.method))
            .then(
                (self.symmetry_mode, self.amo_mode, self.adjacency_mode).cmp(&(
                    other.symmetry_mode,
                    other.amo_mode,
                    other.adjacency_mode,
                )),
            )
    }
}
