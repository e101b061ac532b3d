use core::fmt;
use core::ops::Not;

/// A propositional variable. Indices are 1-based, matching DIMACS.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// # Panics
    /// If `index` is zero.
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variable indices start at 1");
        Var(index)
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    /// Zero-based slot for per-variable arrays.
    #[inline]
    pub(crate) fn idx(self) -> usize {
        (self.0 - 1) as usize
    }

    #[inline]
    pub(crate) fn from_idx(idx: usize) -> Var {
        Var(idx as u32 + 1)
    }

    #[inline]
    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A literal: a variable with a sign.
///
/// Packed as `2 * (var - 1) + negated` so that a literal and its negation
/// are adjacent, which is what the watch lists index on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit((var.idx() as u32) << 1 | (!positive) as u32)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var((self.0 >> 1) + 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }

    /// Signed DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var().index() as i64;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    /// Returns `None` for 0 or values beyond the 32-bit variable range.
    pub fn from_dimacs(value: i64) -> Option<Lit> {
        let abs = value.unsigned_abs();
        if abs == 0 || abs > (u32::MAX >> 1) as u64 {
            return None;
        }
        Some(Lit::new(Var(abs as u32), value > 0))
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}
