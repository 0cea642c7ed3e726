//! Three-valued semantics on finite, loop-free prefixes.
//!
//! Every position at or beyond the end of the prefix is unknown, and the
//! boolean connectives are Kleene's strong ones. Consequently a verdict
//! never flips between Holds and Violated when the prefix is extended.

use crate::semantics::{State, Trace};

use super::Ltl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PrefixVerdict {
    Holds,
    Violated,
    Inconclusive,
}

use PrefixVerdict::{Holds, Inconclusive, Violated};

impl PrefixVerdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Holds
        } else {
            Violated
        }
    }

    pub fn not(self) -> Self {
        match self {
            Holds => Violated,
            Violated => Holds,
            Inconclusive => Inconclusive,
        }
    }

    pub fn and(self, other: Self) -> Self {
        match (self, other) {
            (Violated, _) | (_, Violated) => Violated,
            (Holds, Holds) => Holds,
            _ => Inconclusive,
        }
    }

    pub fn or(self, other: Self) -> Self {
        self.not().and(other.not()).not()
    }
}

/// Verdict of `f` at position 0 of `trace`.
pub fn holds_on_prefix(f: &Ltl, trace: &Trace) -> PrefixVerdict {
    holds_on_states(f, &trace.states)
}

pub(crate) fn holds_on_states(f: &Ltl, states: &[State]) -> PrefixVerdict {
    if states.is_empty() {
        return Inconclusive;
    }
    verdicts(f, states)[0]
}

/// Verdict of `f` at every position of `states`.
pub fn verdicts(f: &Ltl, states: &[State]) -> Vec<PrefixVerdict> {
    let n = states.len();
    let at = |v: &[PrefixVerdict], i: usize| if i < n { v[i] } else { Inconclusive };
    match f {
        Ltl::Const(b) => vec![PrefixVerdict::from_bool(*b); n],
        Ltl::Atom(a) => states
            .iter()
            .map(|s| PrefixVerdict::from_bool(a.expr.eval_bool(s.values()).unwrap_or(false)))
            .collect(),
        Ltl::Not(a) => verdicts(a, states).into_iter().map(PrefixVerdict::not).collect(),
        Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) => {
            let va = verdicts(a, states);
            let vb = verdicts(b, states);
            va.into_iter()
                .zip(vb)
                .map(|(x, y)| match f {
                    Ltl::And(..) => x.and(y),
                    Ltl::Or(..) => x.or(y),
                    _ => x.not().or(y),
                })
                .collect()
        }
        Ltl::Next(a) => {
            let va = verdicts(a, states);
            (0..n).map(|i| at(&va, i + 1)).collect()
        }
        Ltl::Finally(a) | Ltl::Globally(a) => {
            let va = verdicts(a, states);
            let mut out = vec![Inconclusive; n];
            let mut acc = Inconclusive;
            for i in (0..n).rev() {
                acc = if matches!(f, Ltl::Finally(_)) {
                    va[i].or(acc)
                } else {
                    va[i].and(acc)
                };
                out[i] = acc;
            }
            out
        }
        Ltl::Until(a, b) | Ltl::Release(a, b) => {
            let va = verdicts(a, states);
            let vb = verdicts(b, states);
            let mut out = vec![Inconclusive; n];
            let mut acc = Inconclusive;
            for i in (0..n).rev() {
                acc = if matches!(f, Ltl::Until(..)) {
                    vb[i].or(va[i].and(acc))
                } else {
                    vb[i].and(va[i].or(acc))
                };
                out[i] = acc;
            }
            out
        }
        Ltl::BoundedF(lo, hi, a) | Ltl::BoundedG(lo, hi, a) => {
            let va = verdicts(a, states);
            let finally = matches!(f, Ltl::BoundedF(..));
            (0..n)
                .map(|i| {
                    let window = (*lo as usize..=*hi as usize).map(|d| at(&va, i + d));
                    if finally {
                        window.fold(Violated, PrefixVerdict::or)
                    } else {
                        window.fold(Holds, PrefixVerdict::and)
                    }
                })
                .collect()
        }
        Ltl::Once(a) | Ltl::Historically(a) => {
            let va = verdicts(a, states);
            let once = matches!(f, Ltl::Once(_));
            let mut acc = if once { Violated } else { Holds };
            va.into_iter()
                .map(|v| {
                    acc = if once { acc.or(v) } else { acc.and(v) };
                    acc
                })
                .collect()
        }
        Ltl::Yesterday(a) => {
            let va = verdicts(a, states);
            (0..n).map(|i| if i == 0 { Violated } else { va[i - 1] }).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;
    use crate::semantics::{load_model, Value};

    fn setup() -> crate::semantics::TransitionSystem {
        load_model("MODULE main VAR p : boolean; q : boolean;").unwrap()
    }

    fn trace(bits: &[(bool, bool)]) -> Trace {
        Trace::new(
            bits.iter()
                .map(|(p, q)| State(vec![Value::Bool(*p), Value::Bool(*q)]))
                .collect(),
        )
    }

    fn v(f: &str, bits: &[(bool, bool)]) -> PrefixVerdict {
        holds_on_prefix(&parse_ltl(f, &setup()).unwrap(), &trace(bits))
    }

    const ALL_P: [(bool, bool); 5] = [(true, false); 5];

    #[test]
    fn globally_never_holds_on_prefix() {
        assert_eq!(v("G p", &ALL_P), Inconclusive);
        let mut t = ALL_P;
        t[3].0 = false;
        assert_eq!(v("G p", &t), Violated);
    }

    #[test]
    fn finally_never_violated() {
        assert_eq!(v("F q", &ALL_P), Inconclusive);
        let mut t = ALL_P;
        t[4].1 = true;
        assert_eq!(v("F q", &t), Holds);
    }

    #[test]
    fn next_beyond_end_is_unknown() {
        assert_eq!(v("X p", &ALL_P[..1]), Inconclusive);
        assert_eq!(v("X p", &ALL_P[..2]), Holds);
    }

    #[test]
    fn bounded_windows_decide_when_they_fit() {
        assert_eq!(v("G[0,4] p", &ALL_P), Holds);
        assert_eq!(v("G[0,5] p", &ALL_P), Inconclusive);
        assert_eq!(v("F[2,3] q", &ALL_P), Violated);
        assert_eq!(v("F[2,9] q", &ALL_P), Inconclusive);
    }

    #[test]
    fn past_operators_look_back() {
        let t = [(false, false), (false, false), (true, false), (false, false)];
        let f = parse_ltl("O p", &setup()).unwrap();
        let got = verdicts(&f, &trace(&t).states);
        assert_eq!(got, [Violated, Violated, Holds, Holds]);
        let y = parse_ltl("Y p", &setup()).unwrap();
        assert_eq!(verdicts(&y, &trace(&t).states), [Violated, Violated, Violated, Holds]);
        let h = parse_ltl("H !p", &setup()).unwrap();
        assert_eq!(verdicts(&h, &trace(&t).states), [Holds, Holds, Violated, Violated]);
    }

    #[test]
    fn until_and_release() {
        assert_eq!(v("p U q", &[(true, false), (true, false), (false, true)]), Holds);
        assert_eq!(v("p U q", &[(true, false), (false, false)]), Violated);
        assert_eq!(v("p U q", &[(true, false), (true, false)]), Inconclusive);
        assert_eq!(v("q R p", &[(true, false), (true, true)]), Holds);
        assert_eq!(v("q R p", &[(true, false), (false, false)]), Violated);
    }
}
