use alloc::vec::Vec;

use super::lit::{Lit, Var};

/// A plain clause list over variables `1..=num_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
}

impl CnfFormula {
    pub fn new() -> CnfFormula {
        CnfFormula::default()
    }

    pub fn with_vars(num_vars: u32) -> CnfFormula {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Allocates a fresh variable.
    pub fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        Var::new(self.num_vars)
    }

    /// Raises the variable count to at least `n`.
    pub fn reserve_vars(&mut self, n: u32) {
        self.num_vars = self.num_vars.max(n);
    }

    /// Appends a clause verbatim, growing the variable count if needed.
    pub fn add_clause(&mut self, lits: Vec<Lit>) {
        for l in &lits {
            self.num_vars = self.num_vars.max(l.var().index());
        }
        self.clauses.push(lits);
    }

    pub fn extend<I: IntoIterator<Item = Vec<Lit>>>(&mut self, clauses: I) {
        for c in clauses {
            self.add_clause(c);
        }
    }

    /// True if some clause has no literals.
    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    /// Evaluates the formula under a total assignment (`model[v - 1]`).
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|l| model.get(l.var().idx()).copied() == Some(l.is_positive()))
        })
    }
}
