//! Replacement of past operators by observer variables.
//!
//! Each distinct past subformula (compared structurally after its own
//! operands were rewritten) gets one boolean observer added to a copy of the
//! system. The observer's value at step t equals the operator's meaning at
//! t: `O p` is current-inclusive, `Y p` is false at step 0, `H p` holds iff
//! p held at every step so far.

use crate::semantics::{CExpr, MonitorKind, TransitionSystem};

use super::Ltl;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PastError {
    #[error("past operator over a future formula is not supported: {0}")]
    PastOverFuture(String),
}

/// Returns the past-free formula and the system extended with one observer
/// per distinct past subformula.
pub fn eliminate_past(
    f: &Ltl,
    ts: &TransitionSystem,
) -> Result<(Ltl, TransitionSystem), PastError> {
    let mut out = ts.clone();
    let mut counter = 0;
    let g = rewrite(f, &mut out, &mut counter)?;
    Ok((g, out))
}

fn rewrite(f: &Ltl, ts: &mut TransitionSystem, counter: &mut usize) -> Result<Ltl, PastError> {
    let b = |x: &Ltl, ts: &mut TransitionSystem, c: &mut usize| rewrite(x, ts, c).map(Box::new);
    Ok(match f {
        Ltl::Const(_) | Ltl::Atom(_) => f.clone(),
        Ltl::Not(a) => Ltl::Not(b(a, ts, counter)?),
        Ltl::And(x, y) => Ltl::And(b(x, ts, counter)?, b(y, ts, counter)?),
        Ltl::Or(x, y) => Ltl::Or(b(x, ts, counter)?, b(y, ts, counter)?),
        Ltl::Implies(x, y) => Ltl::Implies(b(x, ts, counter)?, b(y, ts, counter)?),
        Ltl::Until(x, y) => Ltl::Until(b(x, ts, counter)?, b(y, ts, counter)?),
        Ltl::Release(x, y) => Ltl::Release(b(x, ts, counter)?, b(y, ts, counter)?),
        Ltl::Next(a) => Ltl::Next(b(a, ts, counter)?),
        Ltl::Finally(a) => Ltl::Finally(b(a, ts, counter)?),
        Ltl::Globally(a) => Ltl::Globally(b(a, ts, counter)?),
        Ltl::BoundedF(lo, hi, a) => Ltl::BoundedF(*lo, *hi, b(a, ts, counter)?),
        Ltl::BoundedG(lo, hi, a) => Ltl::BoundedG(*lo, *hi, b(a, ts, counter)?),
        Ltl::Once(a) | Ltl::Yesterday(a) | Ltl::Historically(a) => {
            let kind = match f {
                Ltl::Once(_) => MonitorKind::Once,
                Ltl::Yesterday(_) => MonitorKind::Yesterday,
                _ => MonitorKind::Historically,
            };
            let inner = rewrite(a, ts, counter)?;
            let operand = state_expr(&inner).ok_or_else(|| PastError::PastOverFuture(f.to_string()))?;
            let existing = ts
                .monitors
                .iter()
                .find(|m| m.kind == kind && m.operand == operand)
                .map(|m| m.var);
            let var = match existing {
                Some(v) => v,
                None => {
                    let name = fresh_name(ts, kind, &inner, counter);
                    ts.add_monitor(&name, kind, operand)
                }
            };
            Ltl::atom(ts.vars[var].name.clone(), CExpr::Var(var))
        }
    })
}

/// The formula as a state expression, if it has no temporal operator.
fn state_expr(f: &Ltl) -> Option<CExpr> {
    Some(match f {
        Ltl::Const(b) => CExpr::Const(crate::semantics::Value::Bool(*b)),
        Ltl::Atom(a) => a.expr.clone(),
        Ltl::Not(a) => CExpr::not(state_expr(a)?),
        Ltl::And(a, b) => CExpr::and(state_expr(a)?, state_expr(b)?),
        Ltl::Or(a, b) => CExpr::or(state_expr(a)?, state_expr(b)?),
        Ltl::Implies(a, b) => CExpr::or(CExpr::not(state_expr(a)?), state_expr(b)?),
        _ => return None,
    })
}

fn fresh_name(ts: &TransitionSystem, kind: MonitorKind, operand: &Ltl, counter: &mut usize) -> String {
    let prefix = match kind {
        MonitorKind::Once => "O",
        MonitorKind::Yesterday => "Y",
        MonitorKind::Historically => "H",
    };
    let simple = match operand {
        Ltl::Atom(a) if a.text.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.') => {
            Some(a.text.replace('.', "_"))
        }
        _ => None,
    };
    let base = match simple {
        Some(s) => format!("{prefix}_{s}"),
        None => {
            *counter += 1;
            format!("{prefix}_past{counter}")
        }
    };
    let mut name = base.clone();
    let mut k = 2;
    while ts.var_index(&name).is_some() || ts.defines.contains_key(&name) {
        name = format!("{base}_{k}");
        k += 1;
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;
    use crate::semantics::{load_model, simulate, ScriptedChoice, State};

    #[test]
    fn paper_formula_gets_two_latches() {
        let ts = load_model(
            "MODULE main VAR OpModeA : boolean; OpModeB : boolean;",
        )
        .unwrap();
        let f = parse_ltl("G !(O OpModeA & O OpModeB)", &ts).unwrap();
        let (g, aug) = eliminate_past(&f, &ts).unwrap();
        assert_eq!(aug.vars.len(), 4);
        assert_eq!(aug.monitors.len(), 2);
        assert!(aug.var_index("O_OpModeA").is_some());
        assert!(aug.var_index("O_OpModeB").is_some());
        assert_eq!(g.to_string(), "G !(O_OpModeA & O_OpModeB)");
        assert!(!g.has_past());
    }

    #[test]
    fn structural_dedup() {
        let ts = load_model("MODULE main VAR p : boolean; q : boolean;").unwrap();
        let f = parse_ltl("G ((O p & Y q) -> (O p | Y q | Y Y q))", &ts).unwrap();
        let (_, aug) = eliminate_past(&f, &ts).unwrap();
        // O p, Y q, and Y (Y q)
        assert_eq!(aug.monitors.len(), 3);
    }

    #[test]
    fn once_latch_sequence() {
        let ts = load_model(
            "MODULE main VAR t : 0..9; ASSIGN init(t) := 0; next(t) := case t < 9 : t + 1; TRUE : t; esac;",
        )
        .unwrap();
        let f = parse_ltl("O t = 2", &ts).unwrap();
        let (_, aug) = eliminate_past(&f, &ts).unwrap();
        let tr = simulate(&aug, 4, &mut ScriptedChoice(|_, _: &State| true)).unwrap();
        let latch: Vec<String> = tr
            .states
            .iter()
            .map(|s| aug.format_value(s.get(aug.monitors[0].var)))
            .collect();
        assert_eq!(latch, ["FALSE", "FALSE", "TRUE", "TRUE", "TRUE"]);
    }

    #[test]
    fn past_over_future_rejected() {
        let ts = load_model("MODULE main VAR p : boolean;").unwrap();
        let f = parse_ltl("O F p", &ts).unwrap();
        assert!(eliminate_past(&f, &ts).is_err());
    }
}
