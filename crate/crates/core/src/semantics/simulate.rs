//! Single-path execution under a choice policy.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::system::{ModelError, State, Successor, TransitionSystem};
use super::trace::Trace;

/// Resolves nondeterminism by picking one state from a non-empty,
/// lexicographically ordered candidate list (`step` is the index of the
/// state being chosen).
pub trait Chooser {
    fn choose(&mut self, step: usize, candidates: &[Successor]) -> usize;
}

/// Always the first listed candidate: every set literal takes its first
/// element and every free variable the first value of its domain.
#[derive(Debug, Clone, Copy, Default)]
pub struct FirstChoice;

impl Chooser for FirstChoice {
    fn choose(&mut self, _step: usize, _candidates: &[Successor]) -> usize {
        0
    }
}

/// Uniform choice from a seeded generator.
#[derive(Debug, Clone)]
pub struct RandomChoice(StdRng);

impl RandomChoice {
    pub fn new(seed: u64) -> Self {
        RandomChoice(StdRng::seed_from_u64(seed))
    }
}

impl Chooser for RandomChoice {
    fn choose(&mut self, _step: usize, candidates: &[Successor]) -> usize {
        self.0.gen_range(0..candidates.len())
    }
}

/// Choice by predicate: the first candidate accepted by the closure, or the
/// first candidate when none is.
pub struct ScriptedChoice<F>(pub F);

impl<F: FnMut(usize, &State) -> bool> Chooser for ScriptedChoice<F> {
    fn choose(&mut self, step: usize, candidates: &[Successor]) -> usize {
        candidates
            .iter()
            .position(|c| matches!(c, Ok(s) if (self.0)(step, s)))
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("model error at step {step}: {error}")]
    Model {
        step: usize,
        error: ModelError,
        /// States computed before the failing step.
        prefix: Trace,
    },
    #[error("no initial state")]
    NoInitialState,
}

/// Run `steps` transitions from an initial state, producing `steps + 1`
/// states.
pub fn simulate(
    ts: &TransitionSystem,
    steps: usize,
    chooser: &mut dyn Chooser,
) -> Result<Trace, SimError> {
    let init = ts.initial_states();
    if init.is_empty() {
        return Err(SimError::NoInitialState);
    }
    let mut states = Vec::with_capacity(steps + 1);
    let first = init[chooser.choose(0, &init)].clone();
    match first {
        Ok(s) => states.push(s),
        Err(error) => {
            return Err(SimError::Model {
                step: 0,
                error,
                prefix: Trace::new(states),
            })
        }
    }
    for step in 1..=steps {
        let succ = ts.successors(states.last().expect("non-empty"));
        let pick = succ[chooser.choose(step, &succ)].clone();
        match pick {
            Ok(s) => states.push(s),
            Err(error) => {
                return Err(SimError::Model {
                    step,
                    error,
                    prefix: Trace::new(states),
                })
            }
        }
    }
    Ok(Trace::new(states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::load_model;

    #[test]
    fn zero_steps_is_initial_state() {
        let ts = load_model("MODULE main VAR x : boolean; ASSIGN init(x) := TRUE;").unwrap();
        let tr = simulate(&ts, 0, &mut FirstChoice).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(ts.show(&tr.states[0], "x").unwrap(), "TRUE");
    }

    #[test]
    fn overflow_reported_with_step() {
        let ts = load_model(
            "MODULE main VAR t : 0..2; ASSIGN init(t) := 0; next(t) := t + 1;",
        )
        .unwrap();
        match simulate(&ts, 5, &mut FirstChoice) {
            Err(SimError::Model { step, prefix, .. }) => {
                assert_eq!(step, 3);
                assert_eq!(prefix.len(), 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn deterministic_model_ignores_policy() {
        let ts = load_model(
            "MODULE main VAR a : boolean; b : boolean;
             ASSIGN init(a) := FALSE; init(b) := TRUE; next(a) := b; next(b) := !a;",
        )
        .unwrap();
        let first = simulate(&ts, 10, &mut FirstChoice).unwrap();
        for seed in 0..5 {
            assert_eq!(simulate(&ts, 10, &mut RandomChoice::new(seed)).unwrap(), first);
        }
    }

    #[test]
    fn scripted_choice_steers() {
        let ts = load_model(
            "MODULE main VAR x : boolean; ASSIGN init(x) := FALSE; next(x) := {FALSE, TRUE};",
        )
        .unwrap();
        let x = ts.var_index("x").unwrap();
        let tr = simulate(
            &ts,
            4,
            &mut ScriptedChoice(|step, s: &State| (step == 2) == s.get(x).as_bool().unwrap()),
        )
        .unwrap();
        let vals: Vec<String> = tr.states.iter().map(|s| ts.show(s, "x").unwrap()).collect();
        assert_eq!(vals, ["FALSE", "FALSE", "TRUE", "FALSE", "FALSE"]);
    }
}
