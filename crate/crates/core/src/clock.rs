//! Time source abstraction. The core has no access to a system clock, so
//! wall-clock budgets are evaluated against whatever [`Clock`] the caller
//! supplies. Without one, time limits never fire.

use core::time::Duration;

/// A monotonic time source.
pub trait Clock {
    /// Time elapsed since an arbitrary fixed origin.
    fn now(&self) -> Duration;
}

/// A clock that never advances.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullClock;

impl Clock for NullClock {
    fn now(&self) -> Duration {
        Duration::ZERO
    }
}

/// Which budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetKind {
    Time,
    Conflicts,
    Nodes,
}

/// Start time plus an optional limit, checked against a clock.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Deadline {
    start: Duration,
    limit: Option<Duration>,
}

impl Deadline {
    pub(crate) fn start(clock: &dyn Clock, limit: Option<Duration>) -> Deadline {
        Deadline {
            start: clock.now(),
            limit,
        }
    }

    pub(crate) fn elapsed(&self, clock: &dyn Clock) -> Duration {
        clock.now().saturating_sub(self.start)
    }

    pub(crate) fn expired(&self, clock: &dyn Clock) -> bool {
        match self.limit {
            Some(limit) => self.elapsed(clock) >= limit,
            None => false,
        }
    }
}
