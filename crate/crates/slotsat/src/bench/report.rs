use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use slotsat_core::encode::SymmetryMode;
use slotsat_core::generator::ExperimentKind;
use thiserror::Error;

use super::record::{format_g6, BenchRecord, Method, RecordError, RunStatus, CSV_HEADER};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no records to report")]
    Empty,
    #[error("records mix experiment kinds {0} and {1}")]
    MixedKinds(&'static str, &'static str),
    #[error("CSV header does not match the record layout")]
    Header,
    #[error("CSV row {row}: {source}")]
    Record { row: usize, source: RecordError },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn write_csv<W: io::Write>(out: W, records: &[BenchRecord]) -> Result<(), ReportError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.to_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<BenchRecord>, ReportError> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    if rd.headers()?.iter().ne(CSV_HEADER) {
        return Err(ReportError::Header);
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let fields: Vec<&str> = row.iter().collect();
        out.push(
            BenchRecord::from_row(&fields)
                .map_err(|source| ReportError::Record { row: i + 1, source })?,
        );
    }
    Ok(out)
}

/// Median of `values`; the mean of the middle two for an even count.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

/// `100 · (baseline − other) / baseline`; negative means `other` is slower.
pub fn improvement_percent(baseline: f64, other: f64) -> Option<f64> {
    (baseline != 0.0).then(|| 100.0 * (baseline - other) / baseline)
}

fn cell(v: Option<f64>) -> String {
    v.map(format_g6).unwrap_or_default()
}

fn tally(records: &[&BenchRecord]) -> String {
    let mut counts: BTreeMap<RunStatus, usize> = BTreeMap::new();
    for r in records {
        *counts.entry(r.status).or_default() += 1;
    }
    counts
        .iter()
        .map(|(s, c)| format!("{} {c}", s.as_str()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn runtimes(records: &[&BenchRecord]) -> Vec<f64> {
    records.iter().map(|r| r.runtime_seconds).collect()
}

fn grid_label(r: &BenchRecord) -> String {
    format!("{}x{}", r.rows, r.cols)
}

/// Markdown tables for records of a single experiment kind.
pub fn markdown_report(records: &[BenchRecord]) -> Result<String, ReportError> {
    let first = records.first().ok_or(ReportError::Empty)?;
    let kind = first.experiment;
    if let Some(other) = records.iter().find(|r| r.experiment != kind) {
        return Err(ReportError::MixedKinds(
            kind.as_str(),
            other.experiment.as_str(),
        ));
    }
    let mut out = format!("# {} experiment\n\n", kind.as_str());
    match kind {
        ExperimentKind::Density => density_table(&mut out, records),
        ExperimentKind::Symmetry => symmetry_table(&mut out, records),
        _ => {}
    }
    summary_table(
        &mut out,
        records,
        matches!(kind, ExperimentKind::Optimization | ExperimentKind::Hybrids),
    );
    Ok(out)
}

/// (rows, cols, rho_hard bits, rho_soft bits, method, symmetry mode)
type GroupKey = (usize, usize, u64, u64, Method, SymmetryMode);

fn summary_table(out: &mut String, records: &[BenchRecord], objective: bool) {
    let mut groups: BTreeMap<GroupKey, Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        let key = (
            r.rows,
            r.cols,
            r.rho_hard.to_bits(),
            r.rho_soft.to_bits(),
            r.method,
            r.symmetry_mode,
        );
        groups.entry(key).or_default().push(r);
    }
    out.push_str(
        "| Grid | rho_hard | rho_soft | Method | Symmetry | Runs | Statuses | Median runtime (s) |",
    );
    if objective {
        out.push_str(" Median objective | Median hint cost |");
    }
    out.push('\n');
    out.push_str("|---|---|---|---|---|---|---|---|");
    if objective {
        out.push_str("---|---|");
    }
    out.push('\n');
    for group in groups.values() {
        let r = group[0];
        let _ = write!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            grid_label(r),
            format_g6(r.rho_hard),
            format_g6(r.rho_soft),
            r.method.as_str(),
            r.symmetry_mode.as_str(),
            group.len(),
            tally(group),
            cell(median(&runtimes(group))),
        );
        if objective {
            let objs: Vec<f64> = group
                .iter()
                .filter_map(|r| r.objective)
                .map(|v| v as f64)
                .collect();
            let hints: Vec<f64> = group
                .iter()
                .filter_map(|r| r.hint_cost)
                .map(|v| v as f64)
                .collect();
            let _ = write!(out, " {} | {} |", cell(median(&objs)), cell(median(&hints)));
        }
        out.push('\n');
    }
    out.push('\n');
}

/// Median runtime per method across density levels, one column per level.
fn density_table(out: &mut String, records: &[BenchRecord]) {
    let mut levels: Vec<f64> = records.iter().map(|r| r.rho_hard).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut methods: Vec<Method> = records.iter().map(|r| r.method).collect();
    methods.sort();
    methods.dedup();
    out.push_str("Median runtime (s) by constraint density\n\n| Method |");
    for l in &levels {
        let _ = write!(out, " rho={} |", format_g6(*l));
    }
    out.push_str("\n|---|");
    out.push_str(&"---|".repeat(levels.len()));
    out.push('\n');
    for m in methods {
        let _ = write!(out, "| {} |", m.as_str());
        for l in &levels {
            let group: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| r.method == m && r.rho_hard == *l)
                .collect();
            let _ = write!(out, " {} |", cell(median(&runtimes(&group))));
        }
        out.push('\n');
    }
    out.push('\n');
}

/// Median runtime without and with symmetry breaking, and the improvement.
fn symmetry_table(out: &mut String, records: &[BenchRecord]) {
    let mut keys: Vec<(usize, usize, Method)> =
        records.iter().map(|r| (r.rows, r.cols, r.method)).collect();
    keys.sort();
    keys.dedup();
    out.push_str(
        "| Grid | Method | Median runtime, no symmetry (s) | Median runtime, fix_first (s) | Improvement % | \
         Median runtime, orbit (s) | Improvement % |\n|---|---|---|---|---|---|---|\n",
    );
    for (rows, cols, method) in keys {
        let med = |mode: SymmetryMode| {
            let group: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| {
                    r.rows == rows
                        && r.cols == cols
                        && r.method == method
                        && r.symmetry_mode == mode
                })
                .collect();
            median(&runtimes(&group))
        };
        let base = med(SymmetryMode::None);
        let _ = write!(
            out,
            "| {rows}x{cols} | {} | {} |",
            method.as_str(),
            cell(base)
        );
        for mode in [SymmetryMode::FixFirst, SymmetryMode::Orbit] {
            let m = med(mode);
            let imp = base.zip(m).and_then(|(b, s)| improvement_percent(b, s));
            let _ = write!(
                out,
                " {} | {} |",
                cell(m),
                imp.map(|v| format!("{v:.1}")).unwrap_or_default()
            );
        }
        out.push('\n');
    }
    out.push('\n');
}
