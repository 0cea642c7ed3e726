//! Independent re-validation of counterexample traces.

use crate::ltl::{holds_on_prefix, Ltl, PrefixVerdict};
use crate::semantics::{Trace, TransitionSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid trace at step {step}: {reason}")]
pub struct InvalidTrace {
    pub step: usize,
    pub reason: String,
}

/// Check that `trace` is an initialized path of `ts` and evaluate
/// `formula` on it.
pub fn replay_counterexample(
    ts: &TransitionSystem,
    trace: &Trace,
    formula: &Ltl,
) -> Result<PrefixVerdict, InvalidTrace> {
    let bad = |step, reason: &str| InvalidTrace {
        step,
        reason: reason.to_string(),
    };
    if trace.is_empty() {
        return Err(bad(0, "empty trace"));
    }
    for (i, s) in trace.states.iter().enumerate() {
        if s.0.len() != ts.vars.len() {
            return Err(bad(i, "state has the wrong number of variables"));
        }
        if let Some((info, _)) = ts
            .vars
            .iter()
            .zip(&s.0)
            .find(|(info, v)| !info.domain.contains(**v))
        {
            return Err(bad(i, &format!("`{}` outside its domain", info.name)));
        }
    }
    if !ts.is_initial(&trace.states[0]) {
        return Err(bad(0, "not an initial state"));
    }
    for (i, w) in trace.states.windows(2).enumerate() {
        if !ts.is_successor(&w[0], &w[1]) {
            return Err(bad(i + 1, "not a successor of the previous state"));
        }
    }
    Ok(holds_on_prefix(formula, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{check_bounded, CheckTask, Verdict};
    use crate::ltl::parse_ltl;
    use crate::semantics::{load_model, Value};

    #[test]
    fn emitted_counterexample_replays_and_corruption_is_caught() {
        let ts = load_model(
            "MODULE main VAR t : 0..5; x : boolean;
             ASSIGN init(t) := 0; init(x) := FALSE;
             next(t) := case t < 5 : t + 1; TRUE : t; esac; next(x) := {FALSE, TRUE};",
        )
        .unwrap();
        let f = parse_ltl("G (t = 3 -> !x)", &ts).unwrap();
        let Verdict::Counterexample { trace, step, .. } = check_bounded(&CheckTask::new(&ts, &f, 8))
        else {
            panic!()
        };
        assert_eq!(step, 3);
        assert_eq!(replay_counterexample(&ts, &trace, &f), Ok(PrefixVerdict::Violated));

        let mut broken = trace.clone();
        let t = ts.var_index("t").unwrap();
        broken.states[2].0[t] = Value::Int(4);
        assert_eq!(replay_counterexample(&ts, &broken, &f).unwrap_err().step, 2);
    }
}
