use std::collections::BTreeSet;

use proptest::prelude::*;
use vcscheck::lang::ast::{ExprKind, VarType};
use vcscheck::lang::{parse_expr, parse_model, pretty_print, validate_model};
use vcscheck::semantics::{
    elaborate, load_model, simulate, Domain, FirstChoice, State, TransitionSystem, Value,
};

const LISTING1: &str = include_str!("fixtures/listing1.fsm");
const LISTING1_MAIN: &str = include_str!("fixtures/listing1_main.fsm");
const TIMER: &str = include_str!("fixtures/timer.fsm");

fn state(ts: &TransitionSystem, assign: &[(&str, &str)]) -> State {
    let mut values = vec![Value::Bool(false); ts.vars.len()];
    for (name, text) in assign {
        let i = ts.var_index(name).unwrap();
        values[i] = ts.parse_value(i, text).unwrap();
    }
    State(values)
}

#[test]
fn listing1_shape() {
    let ast = parse_model(LISTING1).unwrap();
    assert_eq!(ast.modules.len(), 1);
    let m = &ast.modules[0];
    assert_eq!(m.params.len(), 4);
    assert_eq!(m.vars.len(), 1);
    match &m.vars[0].ty {
        VarType::Enum(syms) => {
            let names: Vec<&str> = syms.iter().map(|s| s.name.as_str()).collect();
            assert_eq!(names, ["Init", "Ready", "Active", "Passive"]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn listing1_round_trips() {
    for src in [LISTING1, LISTING1_MAIN, TIMER] {
        let ast = parse_model(src).unwrap();
        assert_eq!(parse_model(&pretty_print(&ast)).unwrap(), ast);
    }
}

#[test]
fn timer_listing_case_shape() {
    let ast = parse_model(TIMER).unwrap();
    let timer = ast.module("M_TIMER").unwrap();
    let rule = timer.assigns.iter().find(|r| r.kind.to_string() == "next").unwrap();
    let ExprKind::Case(arms) = &rule.expr.kind else {
        panic!("not a case")
    };
    assert_eq!(arms.len(), 4);
    assert!(arms[3].guard.is_true_literal());
    assert!(validate_model(&ast).is_empty());
}

#[test]
fn global_defines_bound_ranges() {
    let ts = load_model(TIMER).unwrap();
    let t = ts.var_index("t.Timer").unwrap();
    assert_eq!(ts.vars[t].domain, Domain::Range(0, 5));
    let (c, _) = &ts.defines["Global.T1_MAX"];
    assert_eq!(c.as_const(), Some(Value::Int(5)));
}

#[test]
fn timer_increments_under_condition_2() {
    let ts = load_model(TIMER).unwrap();
    let s = state(&ts, &[("c1", "FALSE"), ("c2", "TRUE"), ("t.Timer", "0")]);
    let timers: BTreeSet<String> = ts
        .successors(&s)
        .into_iter()
        .map(|r| ts.show(&r.unwrap(), "t.Timer").unwrap())
        .collect();
    assert_eq!(timers.into_iter().collect::<Vec<_>>(), ["1"]);
    // free inputs: 2 booleans re-chosen every step
    assert_eq!(ts.successors(&s).len(), 4);
}

#[test]
fn timer_saturates_and_resets() {
    let ts = load_model(TIMER).unwrap();
    let at = |c1: &str, c2: &str, t: &str| {
        let s = state(&ts, &[("c1", c1), ("c2", c2), ("t.Timer", t)]);
        ts.show(&ts.successors(&s)[0].clone().unwrap(), "t.Timer").unwrap()
    };
    assert_eq!(at("FALSE", "TRUE", "5"), "5");
    assert_eq!(at("TRUE", "TRUE", "3"), "0");
    assert_eq!(at("FALSE", "FALSE", "3"), "3");
}

#[test]
fn two_free_booleans() {
    let ts = load_model("MODULE main VAR a : boolean; b : boolean;").unwrap();
    assert_eq!(ts.vars.len(), 2);
    let init: Vec<State> = ts.initial_states().into_iter().map(Result::unwrap).collect();
    assert_eq!(init.len(), 4);
    // lexicographic: last variable fastest
    let shown: Vec<String> = init
        .iter()
        .map(|s| format!("{}{}", ts.show(s, "a").unwrap(), ts.show(s, "b").unwrap()))
        .collect();
    assert_eq!(shown, ["FALSEFALSE", "FALSETRUE", "TRUEFALSE", "TRUETRUE"]);
    assert_eq!(ts.successors(&init[0]).len(), 4);
}

#[test]
fn deterministic_init_gives_one_state() {
    let ts = load_model(
        "MODULE main VAR a : boolean; t : 0..3; ASSIGN init(a) := TRUE; init(t) := 2;",
    )
    .unwrap();
    assert_eq!(ts.initial_states().len(), 1);
}

#[test]
fn init_rules_may_read_other_variables() {
    let ts = load_model(
        "MODULE main VAR a : boolean; b : boolean; ASSIGN init(a) := !b; init(b) := TRUE;",
    )
    .unwrap();
    let init = ts.initial_states();
    assert_eq!(init.len(), 1);
    assert_eq!(ts.show(init[0].as_ref().unwrap(), "a").unwrap(), "FALSE");
}

#[test]
fn set_literal_gives_two_successors() {
    let ts = load_model(
        "MODULE main VAR x : boolean; y : boolean;
         ASSIGN init(x) := FALSE; init(y) := FALSE; next(x) := {TRUE, FALSE}; next(y) := y;",
    )
    .unwrap();
    let s = ts.initial_states()[0].clone().unwrap();
    let succ: Vec<State> = ts.successors(&s).into_iter().map(Result::unwrap).collect();
    assert_eq!(succ.len(), 2);
    assert_eq!(ts.show(&succ[0], "x").unwrap(), "TRUE");
    assert_eq!(ts.show(&succ[1], "x").unwrap(), "FALSE");
    assert_eq!(succ[0].get(1), succ[1].get(1));
    assert_eq!(ts.choice_points.len(), 1);
}

#[test]
fn overflow_poisons_successor() {
    let ts = load_model("MODULE main VAR t : 0..1; ASSIGN init(t) := 1; next(t) := t + 1;")
        .unwrap();
    let s = ts.initial_states()[0].clone().unwrap();
    let succ = ts.successors(&s);
    assert_eq!(succ.len(), 1);
    let err = succ[0].clone().unwrap_err();
    assert_eq!(err.var, "t");
}

#[test]
fn case_first_true_arm_wins() {
    let ts = load_model("MODULE main VAR x : 0..9;").unwrap();
    let s = state(&ts, &[("x", "7")]);
    let single = parse_expr("case TRUE : x; esac").unwrap();
    assert_eq!(ts.eval_expr(&single, &s).unwrap(), Value::Int(7));
    let a = parse_expr("case x > 1 : 1; x > 2 : 2; TRUE : 0; esac").unwrap();
    let b = parse_expr("case x > 2 : 2; x > 1 : 1; TRUE : 0; esac").unwrap();
    assert_eq!(ts.eval_expr(&a, &s).unwrap(), Value::Int(1));
    assert_eq!(ts.eval_expr(&b, &s).unwrap(), Value::Int(2));
}

#[test]
fn listing1_double_failure_is_passive() {
    let ts = load_model(LISTING1_MAIN).unwrap();
    for s1 in ["Init", "Ready", "Active"] {
        for s2 in ["Init", "Ready"] {
            let s = state(
                &ts,
                &[("ecu1.S_ECU1", s1), ("s2", s2), ("s3", "Init"), ("fa", "TRUE"), ("fb", "TRUE")],
            );
            for succ in ts.successors(&s) {
                assert_eq!(ts.show(&succ.unwrap(), "ecu1.S_ECU1").unwrap(), "Passive");
            }
        }
    }
}

#[test]
fn parameters_read_current_state() {
    let ts = load_model(LISTING1_MAIN).unwrap();
    let s = state(
        &ts,
        &[("ecu1.S_ECU1", "Ready"), ("s2", "Ready"), ("s3", "Init"), ("fa", "FALSE"), ("fb", "FALSE")],
    );
    for succ in ts.successors(&s) {
        assert_eq!(ts.show(&succ.unwrap(), "ecu1.S_ECU1").unwrap(), "Active");
    }
}

#[test]
fn instance_variables_readable_by_dot() {
    let ts = load_model(
        "MODULE Cnt VAR v : 0..3; ASSIGN init(v) := 0; next(v) := case v = 3 : 0; TRUE : v + 1; esac;
         MODULE main VAR c : Cnt; w : boolean; ASSIGN init(w) := FALSE; next(w) := c.v = 2;",
    )
    .unwrap();
    let tr = simulate(&ts, 4, &mut FirstChoice).unwrap();
    let w: Vec<String> = tr.states.iter().map(|s| ts.show(s, "w").unwrap()).collect();
    assert_eq!(w, ["FALSE", "FALSE", "FALSE", "TRUE", "FALSE"]);
}

#[test]
fn range_bound_must_be_constant() {
    let ast = parse_model("MODULE main VAR x : boolean; t : 0..x;").unwrap();
    assert!(elaborate(&ast).is_err());
}

// Synchrony: each next value is computed from the pre-state only, whatever
// the order in which rules are written.

#[derive(Debug, Clone)]
enum B {
    Var(usize),
    Not(Box<B>),
    And(Box<B>, Box<B>),
    Or(Box<B>, Box<B>),
}

impl B {
    fn text(&self) -> String {
        match self {
            B::Var(i) => format!("v{i}"),
            B::Not(a) => format!("!({})", a.text()),
            B::And(a, b) => format!("({} & {})", a.text(), b.text()),
            B::Or(a, b) => format!("({} | {})", a.text(), b.text()),
        }
    }
    fn eval(&self, s: &[bool]) -> bool {
        match self {
            B::Var(i) => s[*i],
            B::Not(a) => !a.eval(s),
            B::And(a, b) => a.eval(s) && b.eval(s),
            B::Or(a, b) => a.eval(s) || b.eval(s),
        }
    }
}

fn bexpr(n: usize) -> impl Strategy<Value = B> {
    let leaf = (0..n).prop_map(B::Var);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| B::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| B::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| B::Or(Box::new(a), Box::new(b))),
        ]
    })
}

fn synchronous_model(rules: &[B], order: &[usize]) -> String {
    let n = rules.len();
    let mut src = String::from("MODULE main VAR\n");
    for i in 0..n {
        src.push_str(&format!("  v{i} : boolean;\n"));
    }
    src.push_str("ASSIGN\n");
    for &i in order {
        src.push_str(&format!("  init(v{i}) := FALSE;\n  next(v{i}) := {};\n", rules[i].text()));
    }
    src
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn next_values_come_from_the_snapshot(
        rules in proptest::collection::vec(bexpr(5), 5),
        order in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
        bits in proptest::collection::vec(any::<bool>(), 5),
    ) {
        let ts_a = load_model(&synchronous_model(&rules, &(0..5).collect::<Vec<_>>())).unwrap();
        let ts_b = load_model(&synchronous_model(&rules, &order)).unwrap();
        let s = State(bits.iter().map(|b| Value::Bool(*b)).collect());
        let expected: Vec<Value> = rules.iter().map(|r| Value::Bool(r.eval(&bits))).collect();
        for ts in [&ts_a, &ts_b] {
            let succ = ts.successors(&s);
            prop_assert_eq!(succ.len(), 1);
            prop_assert_eq!(succ[0].clone().unwrap().0, expected.clone());
        }
    }

    #[test]
    fn closed_deterministic_models_have_one_successor(
        rules in proptest::collection::vec(bexpr(4), 4),
    ) {
        let ts = load_model(&synchronous_model(&rules, &[0, 1, 2, 3])).unwrap();
        let mut s = ts.initial_states()[0].clone().unwrap();
        for _ in 0..20 {
            let succ = ts.successors(&s);
            prop_assert_eq!(succ.len(), 1);
            s = succ[0].clone().unwrap();
        }
    }

    #[test]
    fn simulated_steps_are_transitions(
        rules in proptest::collection::vec(bexpr(4), 4),
        seed in any::<u64>(),
    ) {
        let mut src = synchronous_model(&rules, &[0, 1, 2, 3]);
        src = src.replace("next(v3)", "next(v3) := {TRUE, FALSE}; -- ");
        let ts = load_model(&src).unwrap();
        let tr = simulate(&ts, 12, &mut vcscheck::semantics::RandomChoice::new(seed)).unwrap();
        prop_assert!(ts.is_initial(&tr.states[0]));
        for w in tr.states.windows(2) {
            prop_assert!(ts.is_successor(&w[0], &w[1]));
        }
    }
}
