//! Explicit-state bounded search with formula progression.
//!
//! The formula is made past-free (observer variables), bounded windows are
//! unrolled, negations are pushed to the atoms, and every subformula gets
//! a node id. Reading a state turns a node into a residual: a positive
//! and/or combination of obligations on the next position. A prefix is
//! violated exactly when its residual simplifies to false, which matches
//! the Kleene evaluation with unknown positions past the end. The search
//! is breadth-first over (state, residual) pairs, so the first violation
//! found has minimal length.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use crate::ltl::{eliminate_past, expand_bounded, Ltl};
use crate::semantics::{CExpr, State, Trace, TransitionSystem};

use super::{CheckTask, Verdict};

pub fn check_bounded(task: &CheckTask) -> Verdict {
    let start = Instant::now();
    let (future, aug) = match eliminate_past(task.formula, task.ts) {
        Ok(x) => x,
        Err(e) => {
            return Verdict::ModelError {
                step: 0,
                detail: e.to_string(),
            }
        }
    };
    let mut table = NodeTable::default();
    let root = table.add(&nnf(&expand_bounded(&future), true));
    let mut search = Search {
        ts: &aug,
        table: &table,
        root,
        entries: Vec::new(),
        visited: HashSet::new(),
    };
    search.run(task, start)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Const(bool),
    Atom(usize, bool),
    And(u32, u32),
    Or(u32, u32),
    Next(u32),
    Finally(u32),
    Globally(u32),
    Until(u32, u32),
    Release(u32, u32),
}

/// Negation normal form over the future fragment.
fn nnf(f: &Ltl, pos: bool) -> Ltl {
    let b = |x: &Ltl, p: bool| Box::new(nnf(x, p));
    match f {
        Ltl::Const(v) => Ltl::Const(*v == pos),
        Ltl::Atom(_) => {
            if pos {
                f.clone()
            } else {
                Ltl::not(f.clone())
            }
        }
        Ltl::Not(a) => nnf(a, !pos),
        Ltl::And(x, y) if pos => Ltl::And(b(x, true), b(y, true)),
        Ltl::And(x, y) => Ltl::Or(b(x, false), b(y, false)),
        Ltl::Or(x, y) if pos => Ltl::Or(b(x, true), b(y, true)),
        Ltl::Or(x, y) => Ltl::And(b(x, false), b(y, false)),
        Ltl::Implies(x, y) if pos => Ltl::Or(b(x, false), b(y, true)),
        Ltl::Implies(x, y) => Ltl::And(b(x, true), b(y, false)),
        Ltl::Next(a) => Ltl::Next(b(a, pos)),
        Ltl::Finally(a) if pos => Ltl::Finally(b(a, true)),
        Ltl::Finally(a) => Ltl::Globally(b(a, false)),
        Ltl::Globally(a) if pos => Ltl::Globally(b(a, true)),
        Ltl::Globally(a) => Ltl::Finally(b(a, false)),
        Ltl::Until(x, y) if pos => Ltl::Until(b(x, true), b(y, true)),
        Ltl::Until(x, y) => Ltl::Release(b(x, false), b(y, false)),
        Ltl::Release(x, y) if pos => Ltl::Release(b(x, true), b(y, true)),
        Ltl::Release(x, y) => Ltl::Until(b(x, false), b(y, false)),
        Ltl::BoundedF(..)
        | Ltl::BoundedG(..)
        | Ltl::Once(_)
        | Ltl::Yesterday(_)
        | Ltl::Historically(_) => unreachable!("removed before normalization"),
    }
}

#[derive(Default)]
struct NodeTable {
    atoms: Vec<CExpr>,
    nodes: Vec<Node>,
    ids: HashMap<Node, u32>,
}

impl NodeTable {
    fn intern(&mut self, n: Node) -> u32 {
        if let Some(id) = self.ids.get(&n) {
            return *id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        id
    }

    fn atom(&mut self, e: &CExpr) -> usize {
        match self.atoms.iter().position(|a| a == e) {
            Some(i) => i,
            None => {
                self.atoms.push(e.clone());
                self.atoms.len() - 1
            }
        }
    }

    fn add(&mut self, f: &Ltl) -> u32 {
        let n = match f {
            Ltl::Const(v) => Node::Const(*v),
            Ltl::Atom(a) => Node::Atom(self.atom(&a.expr), true),
            Ltl::Not(a) => match &**a {
                Ltl::Atom(a) => Node::Atom(self.atom(&a.expr), false),
                _ => unreachable!("negation normal form"),
            },
            Ltl::And(x, y) => Node::And(self.add(x), self.add(y)),
            Ltl::Or(x, y) => Node::Or(self.add(x), self.add(y)),
            Ltl::Next(a) => Node::Next(self.add(a)),
            Ltl::Finally(a) => Node::Finally(self.add(a)),
            Ltl::Globally(a) => Node::Globally(self.add(a)),
            Ltl::Until(x, y) => Node::Until(self.add(x), self.add(y)),
            Ltl::Release(x, y) => Node::Release(self.add(x), self.add(y)),
            _ => unreachable!("negation normal form"),
        };
        self.intern(n)
    }

    /// Residual of every node after reading `s`.
    fn read(&self, s: &State) -> Vec<Res> {
        let atoms: Vec<bool> = self
            .atoms
            .iter()
            .map(|a| a.eval_bool(s.values()).unwrap_or(false))
            .collect();
        let mut out: Vec<Res> = Vec::with_capacity(self.nodes.len());
        for (id, n) in self.nodes.iter().enumerate() {
            let me = Res::Pend(id as u32);
            let r = match *n {
                Node::Const(v) => Res::constant(v),
                Node::Atom(a, pos) => Res::constant(atoms[a] == pos),
                Node::And(x, y) => Res::and(vec![out[x as usize].clone(), out[y as usize].clone()]),
                Node::Or(x, y) => Res::or(vec![out[x as usize].clone(), out[y as usize].clone()]),
                Node::Next(x) => Res::Pend(x),
                Node::Finally(x) => Res::or(vec![out[x as usize].clone(), me]),
                Node::Globally(x) => Res::and(vec![out[x as usize].clone(), me]),
                Node::Until(x, y) => Res::or(vec![
                    out[y as usize].clone(),
                    Res::and(vec![out[x as usize].clone(), me]),
                ]),
                Node::Release(x, y) => Res::and(vec![
                    out[y as usize].clone(),
                    Res::or(vec![out[x as usize].clone(), me]),
                ]),
            };
            out.push(r);
        }
        out
    }
}

/// Positive boolean combination of obligations on the next position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Res {
    False,
    True,
    Pend(u32),
    And(Vec<Res>),
    Or(Vec<Res>),
}

impl Res {
    fn constant(b: bool) -> Res {
        if b {
            Res::True
        } else {
            Res::False
        }
    }

    fn and(items: Vec<Res>) -> Res {
        Res::combine(items, true)
    }

    fn or(items: Vec<Res>) -> Res {
        Res::combine(items, false)
    }

    fn combine(items: Vec<Res>, conj: bool) -> Res {
        let (unit, zero) = if conj {
            (Res::True, Res::False)
        } else {
            (Res::False, Res::True)
        };
        let mut flat = Vec::with_capacity(items.len());
        for it in items {
            match it {
                x if x == unit => {}
                x if x == zero => return zero,
                Res::And(v) if conj => flat.extend(v),
                Res::Or(v) if !conj => flat.extend(v),
                x => flat.push(x),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => unit,
            1 => flat.pop().expect("one item"),
            _ if conj => Res::And(flat),
            _ => Res::Or(flat),
        }
    }

    /// Discharge pending obligations with the residuals of the next state.
    fn advance(&self, next: &[Res]) -> Res {
        match self {
            Res::False | Res::True => self.clone(),
            Res::Pend(n) => next[*n as usize].clone(),
            Res::And(v) => Res::and(v.iter().map(|r| r.advance(next)).collect()),
            Res::Or(v) => Res::or(v.iter().map(|r| r.advance(next)).collect()),
        }
    }
}

struct Search<'a> {
    ts: &'a TransitionSystem,
    table: &'a NodeTable,
    root: u32,
    /// Visited states with the index of their predecessor.
    entries: Vec<(State, usize)>,
    visited: HashSet<(State, Res)>,
}

const NO_PARENT: usize = usize::MAX;

impl Search<'_> {
    fn run(&mut self, task: &CheckTask, start: Instant) -> Verdict {
        let mut frontier: Vec<(usize, Res)> = Vec::new();
        let mut violation: Option<usize> = None;
        for init in self.ts.initial_states() {
            let s = match init {
                Ok(s) => s,
                Err(e) => {
                    return Verdict::ModelError {
                        step: 0,
                        detail: e.to_string(),
                    }
                }
            };
            let r = self.table.read(&s)[self.root as usize].clone();
            if let Some(idx) = self.visit(s, r.clone(), NO_PARENT) {
                if r == Res::False {
                    violation.get_or_insert(idx);
                } else {
                    frontier.push((idx, r));
                }
            }
        }
        if let Some(idx) = violation {
            return self.counterexample(task, idx, 0);
        }

        let mut work = 0usize;
        for depth in 1..=task.bound {
            let mut next_frontier = Vec::new();
            for (idx, res) in std::mem::take(&mut frontier) {
                work += 1;
                if work % 64 == 0 && start.elapsed() > task.timeout {
                    return Verdict::Timeout(start.elapsed());
                }
                let succ = self.ts.successors(&self.entries[idx].0);
                for next in succ {
                    let s = match next {
                        Ok(s) => s,
                        Err(e) => {
                            return Verdict::ModelError {
                                step: depth,
                                detail: e.to_string(),
                            }
                        }
                    };
                    let r = res.advance(&self.table.read(&s));
                    if let Some(child) = self.visit(s, r.clone(), idx) {
                        if r == Res::False {
                            violation.get_or_insert(child);
                        } else {
                            next_frontier.push((child, r));
                        }
                    }
                }
            }
            if let Some(idx) = violation {
                return self.counterexample(task, idx, depth);
            }
            if next_frontier.is_empty() {
                break;
            }
            frontier = next_frontier;
        }
        Verdict::NoCounterexampleWithinBound(task.bound)
    }

    fn visit(&mut self, s: State, r: Res, parent: usize) -> Option<usize> {
        let key = (s, r);
        if self.visited.contains(&key) {
            return None;
        }
        let (s, r) = key;
        self.entries.push((s.clone(), parent));
        self.visited.insert((s, r));
        Some(self.entries.len() - 1)
    }

    fn counterexample(&self, task: &CheckTask, mut idx: usize, step: usize) -> Verdict {
        let mut states = Vec::with_capacity(step + 1);
        loop {
            let (s, parent) = &self.entries[idx];
            states.push(task.ts.project(s));
            if *parent == NO_PARENT {
                break;
            }
            idx = *parent;
        }
        states.reverse();
        Verdict::Counterexample {
            trace: Trace::new(states),
            formula: task.formula.clone(),
            step,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;
    use crate::semantics::load_model;

    fn check(model: &str, f: &str, k: usize) -> Verdict {
        let ts = load_model(model).unwrap();
        let f = parse_ltl(f, &ts).unwrap();
        check_bounded(&CheckTask::new(&ts, &f, k))
    }

    #[test]
    fn g_false_fails_immediately() {
        let v = check("MODULE main VAR x : boolean;", "G FALSE", 0);
        match v {
            Verdict::Counterexample { trace, step, .. } => {
                assert_eq!(step, 0);
                assert_eq!(trace.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_variable_violates_invariant() {
        let v = check("MODULE main VAR x : boolean; y : boolean;", "G x", 3);
        assert!(matches!(v, Verdict::Counterexample { step: 0, .. }));
        let v = check(
            "MODULE main VAR x : boolean; y : boolean; ASSIGN init(x) := TRUE;",
            "G x",
            3,
        );
        assert!(matches!(v, Verdict::Counterexample { step: 1, .. }));
    }

    #[test]
    fn invariant_without_violation() {
        let v = check(
            "MODULE main VAR t : 0..3; ASSIGN init(t) := 0; next(t) := case t < 3 : t + 1; TRUE : 0; esac;",
            "G t <= 3",
            20,
        );
        assert_eq!(v, Verdict::NoCounterexampleWithinBound(20));
    }

    #[test]
    fn overflow_is_model_error() {
        let v = check(
            "MODULE main VAR t : 0..3; ASSIGN init(t) := 0; next(t) := t + 1;",
            "G TRUE",
            10,
        );
        assert!(matches!(v, Verdict::ModelError { step: 4, .. }), "{v:?}");
    }

    #[test]
    fn deadline_violation_step() {
        // t counts 0,1,2,...; "within 2 steps t reaches 5" fails at step 2
        let v = check(
            "MODULE main VAR t : 0..9; ASSIGN init(t) := 0; next(t) := case t < 9 : t + 1; TRUE : t; esac;",
            "F[0,2] t = 5",
            10,
        );
        assert!(matches!(v, Verdict::Counterexample { step: 2, .. }), "{v:?}");
    }

    #[test]
    fn residual_normalization() {
        let r = Res::and(vec![Res::Pend(2), Res::True, Res::and(vec![Res::Pend(1), Res::Pend(2)])]);
        assert_eq!(r, Res::And(vec![Res::Pend(1), Res::Pend(2)]));
        assert_eq!(Res::or(vec![Res::Pend(1), Res::True]), Res::True);
        assert_eq!(Res::and(vec![]), Res::True);
    }
}
