//! Search budgets.
//!
//! Searches are metered in steps so that verdicts are reproducible. A wall
//! clock limit can be added on top; a run that hits it may report
//! `Unresolved` where a slower machine and a faster one disagree.

use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub steps: u64,
    pub millis: Option<u64>,
}

impl Budget {
    pub const fn steps(steps: u64) -> Self {
        Budget {
            steps,
            millis: None,
        }
    }

    pub fn with_millis(self, millis: u64) -> Self {
        Budget {
            millis: Some(millis),
            ..self
        }
    }

    pub fn meter(&self) -> Meter {
        Meter {
            limit: self.steps,
            used: 0,
            deadline: self.millis.map(|ms| Instant::now() + Duration::from_millis(ms)),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::steps(20_000)
    }
}

#[derive(Debug)]
pub struct Meter {
    limit: u64,
    used: u64,
    deadline: Option<Instant>,
}

impl Meter {
    /// Consumes one step; `false` once the budget is spent.
    pub fn tick(&mut self) -> bool {
        if self.used >= self.limit {
            return false;
        }
        if let Some(d) = self.deadline {
            if self.used % 64 == 0 && Instant::now() >= d {
                self.used = self.limit;
                return false;
            }
        }
        self.used += 1;
        true
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }
}
