//! Exhaustive search over injective machine-to-slot maps. Deliberately
//! naive: every candidate is checked with [`Instance::is_feasible`] and no
//! constraint is used to cut the enumeration.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{OptStatus, OptimizeResult};
use crate::layout::{Instance, Layout, Slot};

/// Largest unblocked slot count the oracle accepts (9! candidates).
pub const ORACLE_MAX_SLOTS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleError {
    pub slots: usize,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "brute force is limited to {ORACLE_MAX_SLOTS} unblocked slots, instance has {}",
            self.slots
        )
    }
}

impl core::error::Error for OracleError {}

fn for_each_candidate(instance: &Instance, mut visit: impl FnMut(&Layout)) -> Result<(), OracleError> {
    let open = instance.grid().unblocked_slots();
    if open.len() > ORACLE_MAX_SLOTS {
        return Err(OracleError { slots: open.len() });
    }
    let n = instance.n_machines();
    if n > open.len() {
        return Ok(());
    }
    let mut layout = Layout::new(vec![0; n]);
    let mut used = vec![false; open.len()];
    fn rec(k: usize, open: &[Slot], used: &mut [bool], layout: &mut Layout, visit: &mut dyn FnMut(&Layout)) {
        if k == layout.slot_of.len() {
            visit(layout);
            return;
        }
        for i in 0..open.len() {
            if !used[i] {
                used[i] = true;
                layout.slot_of[k] = open[i];
                rec(k + 1, open, used, layout, visit);
                used[i] = false;
            }
        }
    }
    rec(0, &open, &mut used, &mut layout, &mut visit);
    Ok(())
}

/// Every feasible layout, in lexicographic order of slot assignments.
pub fn feasible_layouts(instance: &Instance) -> Result<Vec<Layout>, OracleError> {
    let mut out = Vec::new();
    for_each_candidate(instance, |l| {
        if instance.is_feasible(l) {
            out.push(l.clone());
        }
    })?;
    Ok(out)
}

pub fn count_feasible_layouts(instance: &Instance) -> Result<u64, OracleError> {
    let mut count = 0;
    for_each_candidate(instance, |l| {
        if instance.is_feasible(l) {
            count += 1;
        }
    })?;
    Ok(count)
}

/// Exact optimum by enumeration; the first minimal layout in lexicographic
/// order is returned.
pub fn brute_force_oracle(instance: &Instance) -> Result<OptimizeResult, OracleError> {
    let mut best: Option<(u64, Layout)> = None;
    let mut explored = 0u64;
    for_each_candidate(instance, |l| {
        explored += 1;
        if !instance.is_feasible(l) {
            return;
        }
        let cost = instance.objective_unchecked(l);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, l.clone()));
        }
    })?;
    Ok(match best {
        Some((cost, layout)) => OptimizeResult {
            status: OptStatus::Opt,
            best_layout: Some(layout),
            best_objective: Some(cost),
            nodes_explored: explored,
            ..OptimizeResult::default()
        },
        None => OptimizeResult {
            status: OptStatus::Infeasible,
            nodes_explored: explored,
            ..OptimizeResult::default()
        },
    })
}
