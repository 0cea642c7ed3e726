//! Random small models and formulas shared by the property suites.

#![allow(dead_code)]

use proptest::prelude::*;

/// Boolean expression over variables `v0..vn`.
#[derive(Debug, Clone)]
pub enum B {
    Const(bool),
    Var(usize),
    Not(Box<B>),
    And(Box<B>, Box<B>),
    Or(Box<B>, Box<B>),
}

impl B {
    pub fn text(&self) -> String {
        match self {
            B::Const(true) => "TRUE".into(),
            B::Const(false) => "FALSE".into(),
            B::Var(i) => format!("v{i}"),
            B::Not(a) => format!("!({})", a.text()),
            B::And(a, b) => format!("({} & {})", a.text(), b.text()),
            B::Or(a, b) => format!("({} | {})", a.text(), b.text()),
        }
    }
}

pub fn bexpr(n: usize) -> impl Strategy<Value = B> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(B::Const),
        4 => (0..n).prop_map(B::Var),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| B::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| B::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| B::Or(Box::new(a), Box::new(b))),
        ]
    })
}

#[derive(Debug, Clone)]
pub enum Rule {
    /// `init := c; next := expr`
    Det(bool, B),
    /// `init := c; next := {TRUE, FALSE}`
    Choice(bool),
    /// No rules at all.
    Free,
}

#[derive(Debug, Clone)]
pub struct RandomModel {
    pub rules: Vec<Rule>,
    /// Adds `c : 0..2` incremented while `v0` holds, which can overflow.
    pub counter: bool,
}

impl RandomModel {
    pub fn vars(&self) -> usize {
        self.rules.len()
    }

    /// Number of variables that branch on every step.
    pub fn branching(&self) -> usize {
        self.rules.iter().filter(|r| !matches!(r, Rule::Det(..))).count()
    }

    pub fn source(&self) -> String {
        let mut s = String::from("MODULE main\nVAR\n");
        for i in 0..self.vars() {
            s.push_str(&format!("  v{i} : boolean;\n"));
        }
        if self.counter {
            s.push_str("  c : 0..2;\n");
        }
        s.push_str("ASSIGN\n");
        let lit = |b: bool| if b { "TRUE" } else { "FALSE" };
        for (i, r) in self.rules.iter().enumerate() {
            match r {
                Rule::Det(c, e) => {
                    s.push_str(&format!("  init (v{i}) := {};\n  next (v{i}) := {};\n", lit(*c), e.text()))
                }
                Rule::Choice(c) => {
                    s.push_str(&format!("  init (v{i}) := {};\n  next (v{i}) := {{TRUE, FALSE}};\n", lit(*c)))
                }
                Rule::Free => {}
            }
        }
        if self.counter {
            s.push_str("  init (c) := 0;\n  next (c) := case v0 : c + 1; TRUE : c; esac;\n");
        }
        s
    }
}

/// Up to `max_vars` booleans with at most `max_branching` of them
/// nondeterministic.
pub fn model(max_vars: usize, max_branching: usize, counter: bool) -> impl Strategy<Value = RandomModel> {
    (1..=max_vars)
        .prop_flat_map(move |n| {
            let rule = prop_oneof![
                4 => (any::<bool>(), bexpr(n)).prop_map(|(c, e)| Rule::Det(c, e)),
                1 => any::<bool>().prop_map(Rule::Choice),
                1 => Just(Rule::Free),
            ];
            (prop::collection::vec(rule, n), any::<bool>())
        })
        .prop_filter("too much branching", move |(rules, _)| {
            rules.iter().filter(|r| !matches!(r, Rule::Det(..))).count() <= max_branching
        })
        .prop_map(move |(rules, c)| RandomModel {
            rules,
            counter: counter && c,
        })
}

/// Formula syntax tree rendered to the spec dialect.
#[derive(Debug, Clone)]
pub enum F {
    Atom(B),
    Not(Box<F>),
    And(Box<F>, Box<F>),
    Or(Box<F>, Box<F>),
    Implies(Box<F>, Box<F>),
    Next(Box<F>),
    Until(Box<F>, Box<F>),
    Release(Box<F>, Box<F>),
    Fin(Box<F>),
    Glob(Box<F>),
    BF(u32, u32, Box<F>),
    BG(u32, u32, Box<F>),
    Once(Box<F>),
    Yest(Box<F>),
    Hist(Box<F>),
}

impl F {
    pub fn text(&self) -> String {
        let u = |op: &str, a: &F| format!("{op} ({})", a.text());
        let b = |op: &str, a: &F, c: &F| format!("({}) {op} ({})", a.text(), c.text());
        match self {
            F::Atom(e) => e.text(),
            F::Not(a) => u("!", a),
            F::And(a, c) => b("&", a, c),
            F::Or(a, c) => b("|", a, c),
            F::Implies(a, c) => b("->", a, c),
            F::Next(a) => u("X", a),
            F::Until(a, c) => b("U", a, c),
            F::Release(a, c) => b("R", a, c),
            F::Fin(a) => u("F", a),
            F::Glob(a) => u("G", a),
            F::BF(lo, hi, a) => u(&format!("F[{lo},{hi}]"), a),
            F::BG(lo, hi, a) => u(&format!("G[{lo},{hi}]"), a),
            F::Once(a) => u("O", a),
            F::Yest(a) => u("Y", a),
            F::Hist(a) => u("H", a),
        }
    }

    /// Deepest nesting of past operators.
    pub fn past_depth(&self) -> usize {
        match self {
            F::Atom(_) => 0,
            F::Once(a) | F::Yest(a) | F::Hist(a) => 1 + a.past_depth(),
            F::Not(a) | F::Next(a) | F::Fin(a) | F::Glob(a) | F::BF(_, _, a) | F::BG(_, _, a) => a.past_depth(),
            F::And(a, c) | F::Or(a, c) | F::Implies(a, c) | F::Until(a, c) | F::Release(a, c) => {
                a.past_depth().max(c.past_depth())
            }
        }
    }
}

fn window() -> impl Strategy<Value = (u32, u32)> {
    (0u32..4, 0u32..4).prop_map(|(a, d)| (a, a + d))
}

/// Past-only formula with operator nesting at most `depth`.
pub fn past_formula(n: usize, depth: u32) -> BoxedStrategy<F> {
    let atom = bexpr(n).prop_map(F::Atom).boxed();
    if depth == 0 {
        return atom;
    }
    let inner = past_formula(n, depth - 1);
    prop_oneof![
        2 => atom,
        1 => inner.clone().prop_map(|a| F::Not(Box::new(a))),
        1 => (inner.clone(), inner.clone()).prop_map(|(a, c)| F::And(Box::new(a), Box::new(c))),
        1 => (inner.clone(), inner.clone()).prop_map(|(a, c)| F::Or(Box::new(a), Box::new(c))),
        2 => inner.clone().prop_map(|a| F::Once(Box::new(a))),
        2 => inner.clone().prop_map(|a| F::Yest(Box::new(a))),
        1 => inner.prop_map(|a| F::Hist(Box::new(a))),
    ]
    .boxed()
}

/// Future formula over `X U R F[a,b] G[a,b]`, negation and boolean
/// connectives, optionally with past-only subformulas at the leaves.
pub fn future_formula(n: usize, with_past: bool, unbounded: bool) -> impl Strategy<Value = F> {
    let leaf = if with_past {
        prop_oneof![2 => bexpr(n).prop_map(F::Atom), 3 => past_formula(n, 3)].boxed()
    } else {
        bexpr(n).prop_map(F::Atom).boxed()
    };
    leaf.prop_recursive(4, 16, 2, move |inner| {
        let mut ops = vec![
            (1, inner.clone().prop_map(|a| F::Not(Box::new(a))).boxed()),
            (1, (inner.clone(), inner.clone()).prop_map(|(a, c)| F::And(Box::new(a), Box::new(c))).boxed()),
            (1, (inner.clone(), inner.clone()).prop_map(|(a, c)| F::Or(Box::new(a), Box::new(c))).boxed()),
            (1, (inner.clone(), inner.clone()).prop_map(|(a, c)| F::Implies(Box::new(a), Box::new(c))).boxed()),
            (2, inner.clone().prop_map(|a| F::Next(Box::new(a))).boxed()),
            (2, (inner.clone(), inner.clone()).prop_map(|(a, c)| F::Until(Box::new(a), Box::new(c))).boxed()),
            (2, (inner.clone(), inner.clone()).prop_map(|(a, c)| F::Release(Box::new(a), Box::new(c))).boxed()),
            (2, (window(), inner.clone()).prop_map(|((lo, hi), a)| F::BF(lo, hi, Box::new(a))).boxed()),
            (2, (window(), inner.clone()).prop_map(|((lo, hi), a)| F::BG(lo, hi, Box::new(a))).boxed()),
        ];
        if unbounded {
            ops.push((1, inner.clone().prop_map(|a| F::Fin(Box::new(a))).boxed()));
            ops.push((2, inner.prop_map(|a| F::Glob(Box::new(a))).boxed()));
        }
        prop::strategy::Union::new_weighted(ops)
    })
}

/// A model, a formula over its variables and a bound. The bound is chosen
/// so that `branching * (k + 1) <= budget`, which keeps path enumeration
/// cheap.
pub fn check_case(
    with_past: bool,
    max_k: usize,
    budget: usize,
) -> impl Strategy<Value = (RandomModel, F, usize)> {
    model(6, 2, true).prop_flat_map(move |m| {
        let n = m.vars();
        let b = m.branching().max(1);
        let k = (budget / b).saturating_sub(1).min(max_k);
        (Just(m), future_formula(n, with_past, true), 0..=k)
    })
}
