//! Reference engine: enumerate every initialized path up to the bound and
//! evaluate the original formula (past operators included) on each prefix.

use crate::ltl::PrefixVerdict;
use crate::semantics::{State, Trace};

use super::{CheckTask, Verdict};
use crate::ltl::verdicts;

#[derive(Debug, Clone, Copy)]
pub struct BruteCaps {
    /// Maximum number of path prefixes examined.
    pub max_prefixes: usize,
}

impl Default for BruteCaps {
    fn default() -> Self {
        BruteCaps {
            max_prefixes: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("path enumeration exceeded {0} prefixes")]
pub struct CapExceeded(pub usize);

enum Event {
    Error(usize, String),
    Violation(Vec<State>),
}

impl Event {
    /// Earlier step first; an error beats a violation at the same step.
    fn key(&self) -> (usize, u8) {
        match self {
            Event::Error(step, _) => (*step, 0),
            Event::Violation(path) => (path.len() - 1, 1),
        }
    }
}

pub fn brute_force_check(task: &CheckTask, caps: BruteCaps) -> Result<Verdict, CapExceeded> {
    let mut best: Option<Event> = None;
    let mut count = 0usize;
    let mut path = Vec::new();
    for init in task.ts.initial_states() {
        match init {
            Err(e) => offer(&mut best, Event::Error(0, e.to_string())),
            Ok(s) => {
                path.push(s);
                explore(task, &mut path, &mut best, &mut count, caps)?;
                path.pop();
            }
        }
    }
    Ok(match best {
        None => Verdict::NoCounterexampleWithinBound(task.bound),
        Some(Event::Error(step, detail)) => Verdict::ModelError { step, detail },
        Some(Event::Violation(states)) => Verdict::Counterexample {
            step: states.len() - 1,
            trace: Trace::new(states),
            formula: task.formula.clone(),
        },
    })
}

fn offer(best: &mut Option<Event>, e: Event) {
    if best.as_ref().map_or(true, |b| e.key() < b.key()) {
        *best = Some(e);
    }
}

fn explore(
    task: &CheckTask,
    path: &mut Vec<State>,
    best: &mut Option<Event>,
    count: &mut usize,
    caps: BruteCaps,
) -> Result<(), CapExceeded> {
    *count += 1;
    if *count > caps.max_prefixes {
        return Err(CapExceeded(caps.max_prefixes));
    }
    let depth = path.len() - 1;
    // nothing found below can beat an event at this depth or earlier
    if best.as_ref().is_some_and(|b| b.key().0 < depth) {
        return Ok(());
    }
    if verdicts(task.formula, path)[0] == PrefixVerdict::Violated {
        offer(best, Event::Violation(path.clone()));
        return Ok(());
    }
    if depth == task.bound {
        return Ok(());
    }
    for next in task.ts.successors(path.last().expect("non-empty")) {
        match next {
            Err(e) => offer(best, Event::Error(depth + 1, e.to_string())),
            Ok(s) => {
                path.push(s);
                explore(task, path, best, count, caps)?;
                path.pop();
            }
        }
    }
    Ok(())
}
