//! DIMACS CNF reading and writing.
//!
//! Layout encodings are exported with one `c x <machine> <slot> <var>`
//! comment per primary variable so that models from external solvers can be
//! decoded again.

use std::fmt::Write as _;
use std::io;

use slotsat_core::encode::VarMap;
use slotsat_core::sat::{CnfFormula, Lit};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed problem line")]
    BadHeader { line: usize },
    #[error("line {line}: second problem line")]
    DuplicateHeader { line: usize },
    #[error("line {line}: `{token}` is not an integer literal")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: variable {var} exceeds the declared {max}")]
    VarOutOfRange { line: usize, var: u64, max: u32 },
    #[error("line {line}: malformed `c x` varmap comment")]
    BadVarmap { line: usize },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("no `p cnf` header")]
    NoHeader,
}

/// A parsed DIMACS file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dimacs {
    pub formula: CnfFormula,
    /// `(machine, slot, var)` triples from `c x` comments, in file order.
    pub varmap: Vec<(usize, usize, u32)>,
}

/// Renders `formula` in DIMACS CNF. With a varmap, the primary variables
/// are listed in `c x` comments ahead of the header.
pub fn to_dimacs(formula: &CnfFormula, varmap: Option<&VarMap>) -> String {
    let mut out = String::new();
    if let Some(vm) = varmap {
        for i in 0..vm.n_machines() {
            for j in 0..vm.n_slots() {
                let _ = writeln!(out, "c x {i} {j} {}", vm.x(i, j).index());
            }
        }
    }
    let _ = writeln!(out, "p cnf {} {}", formula.num_vars(), formula.len());
    for clause in formula.clauses() {
        for l in clause {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

pub fn write_dimacs<W: io::Write>(
    mut w: W,
    formula: &CnfFormula,
    varmap: Option<&VarMap>,
) -> io::Result<()> {
    w.write_all(to_dimacs(formula, varmap).as_bytes())
}

/// Parses DIMACS CNF. Clauses may span lines; a `%` line ends the clause
/// section, as in the SATLIB benchmark files.
pub fn parse_dimacs(text: &str) -> Result<Dimacs, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut varmap = Vec::new();
    let mut formula = CnfFormula::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut open = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let mut parts = rest.split_whitespace();
                if parts.next() == Some("x") {
                    let nums: Vec<Option<u64>> = parts.map(|t| t.parse().ok()).collect();
                    match nums.as_slice() {
                        [Some(i), Some(j), Some(v)] if *v >= 1 && *v <= u32::MAX as u64 => {
                            varmap.push((*i as usize, *j as usize, *v as u32));
                        }
                        _ => return Err(DimacsError::BadVarmap { line }),
                    }
                }
                continue;
            }
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line });
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v: u32 = v.parse().map_err(|_| DimacsError::BadHeader { line })?;
                    let c: usize = c.parse().map_err(|_| DimacsError::BadHeader { line })?;
                    header = Some((v, c));
                    formula = CnfFormula::with_vars(v);
                }
                _ => return Err(DimacsError::BadHeader { line }),
            }
            continue;
        }
        let Some((max, _)) = header else {
            return Err(DimacsError::MissingHeader { line });
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| DimacsError::BadLiteral {
                line,
                token: token.to_string(),
            })?;
            if value == 0 {
                formula.add_clause(std::mem::take(&mut current));
                open = false;
                continue;
            }
            if value.unsigned_abs() > max as u64 {
                return Err(DimacsError::VarOutOfRange {
                    line,
                    var: value.unsigned_abs(),
                    max,
                });
            }
            current.push(Lit::from_dimacs(value).expect("nonzero"));
            open = true;
        }
    }
    let Some((_, declared)) = header else {
        return Err(DimacsError::NoHeader);
    };
    if open {
        return Err(DimacsError::Unterminated);
    }
    if formula.len() != declared {
        return Err(DimacsError::ClauseCount {
            declared,
            found: formula.len(),
        });
    }
    Ok(Dimacs { formula, varmap })
}
