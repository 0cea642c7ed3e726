//! Bounded counterexample search.
//!
//! [`check_bounded`] is the production engine; [`brute_force_check`]
//! enumerates paths and evaluates the formula directly and serves as the
//! reference it is tested against; [`replay_counterexample`] re-validates
//! an emitted trace before it is filed.

mod bmc;
mod brute;
mod replay;

use std::time::Duration;

use crate::ltl::Ltl;
use crate::semantics::{Trace, TransitionSystem};

pub use bmc::check_bounded;
pub use brute::{brute_force_check, BruteCaps, CapExceeded};
pub use replay::{replay_counterexample, InvalidTrace};

/// Bound used when none is given.
pub const DEFAULT_BOUND: usize = 70;
/// Per-task budget used when none is given.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(15 * 60);

#[derive(Debug, Clone, Copy)]
pub struct CheckTask<'a> {
    pub ts: &'a TransitionSystem,
    pub formula: &'a Ltl,
    pub bound: usize,
    pub timeout: Duration,
}

impl<'a> CheckTask<'a> {
    pub fn new(ts: &'a TransitionSystem, formula: &'a Ltl, bound: usize) -> Self {
        CheckTask {
            ts,
            formula,
            bound,
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Every initialized path with at most `k` transitions leaves the
    /// formula undecided or satisfied.
    NoCounterexampleWithinBound(usize),
    /// A shortest violating prefix; `step` is the index of its last state.
    Counterexample {
        trace: Trace,
        formula: Ltl,
        step: usize,
    },
    /// A rule produced an out-of-domain value or failed to evaluate at
    /// `step`.
    ModelError { step: usize, detail: String },
    Timeout(Duration),
}

/// The part of a verdict that two correct engines must agree on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictClass {
    NoCounterexample(usize),
    Counterexample(usize),
    ModelError(usize),
    Timeout,
}

impl Verdict {
    pub fn class(&self) -> VerdictClass {
        match self {
            Verdict::NoCounterexampleWithinBound(k) => VerdictClass::NoCounterexample(*k),
            Verdict::Counterexample { step, .. } => VerdictClass::Counterexample(*step),
            Verdict::ModelError { step, .. } => VerdictClass::ModelError(*step),
            Verdict::Timeout(_) => VerdictClass::Timeout,
        }
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample { .. })
    }
}
