//! The flattened synchronous transition system and its one-step semantics.

use std::collections::{BTreeMap, HashMap};

use crate::lang::ast::{AssignKind, Expr, Span};
use crate::lang::{parse_expr, Diagnostic};

use super::expr::{CExpr, EvalError};
use super::typing::{lower, Position, Resolver};
use super::value::{Domain, SymId, Ty, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Ordinary model variable driven by init/next rules (or free).
    State,
    /// Observer variable computed from the state it is attached to; never
    /// read by model rules.
    Monitor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarInfo {
    /// Qualified name: instance path plus local name, e.g. `e1.S`.
    pub name: String,
    pub domain: Domain,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonitorKind {
    /// Holds iff the operand held at some step up to and including now.
    Once,
    /// Holds iff there is a previous step and the operand held there.
    Yesterday,
    /// Holds iff the operand held at every step up to and including now.
    Historically,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monitor {
    pub var: usize,
    pub kind: MonitorKind,
    pub operand: CExpr,
}

/// Source location of a nondeterministic set literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoicePoint {
    pub var: usize,
    pub rule: AssignKind,
    pub span: Span,
}

/// Total assignment of values to the system variables, indexed like
/// [`TransitionSystem::vars`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(pub Vec<Value>);

impl State {
    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn get(&self, var: usize) -> Value {
        self.0[var]
    }
}

/// Runtime model error: a rule produced a value outside the target domain
/// or an expression could not be evaluated.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{var}: {detail}")]
pub struct ModelError {
    pub var: String,
    pub detail: String,
}

pub type Successor = Result<State, ModelError>;

#[derive(Debug, Clone)]
pub struct TransitionSystem {
    pub vars: Vec<VarInfo>,
    pub init_rules: Vec<Option<CExpr>>,
    pub next_rules: Vec<Option<CExpr>>,
    pub choice_points: Vec<ChoicePoint>,
    /// Compiled DEFINEs by qualified name.
    pub defines: BTreeMap<String, (CExpr, Ty)>,
    pub symbols: Vec<String>,
    pub monitors: Vec<Monitor>,
    /// Documentary: wall time represented by one step.
    pub step_duration_ms: u32,
    pub(crate) index: HashMap<String, usize>,
    pub(crate) sym_index: HashMap<String, SymId>,
    /// State variables in an order where every init rule only reads
    /// variables that come earlier.
    pub(crate) init_order: Vec<usize>,
}

impl TransitionSystem {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn symbol(&self, name: &str) -> Option<SymId> {
        self.sym_index.get(name).copied()
    }

    pub fn symbol_name(&self, id: SymId) -> &str {
        &self.symbols[id.0 as usize]
    }

    pub fn state_var_count(&self) -> usize {
        self.vars
            .iter()
            .filter(|v| v.kind == VarKind::State)
            .count()
    }

    /// Render a value the way the model language writes it.
    pub fn format_value(&self, v: Value) -> String {
        match v {
            Value::Bool(true) => "TRUE".into(),
            Value::Bool(false) => "FALSE".into(),
            Value::Int(x) => x.to_string(),
            Value::Sym(s) => self.symbol_name(s).to_string(),
        }
    }

    /// Parse a value literal for variable `var`.
    pub fn parse_value(&self, var: usize, text: &str) -> Option<Value> {
        let text = text.trim();
        let v = match &self.vars[var].domain {
            Domain::Bool => match text {
                "TRUE" => Value::Bool(true),
                "FALSE" => Value::Bool(false),
                _ => return None,
            },
            Domain::Range(..) => Value::Int(text.parse().ok()?),
            Domain::Enum(_) => Value::Sym(self.symbol(text)?),
        };
        self.vars[var].domain.contains(v).then_some(v)
    }

    pub fn value_of(&self, state: &State, name: &str) -> Option<Value> {
        self.var_index(name).map(|i| state.get(i))
    }

    /// Look up a value by variable name and render it.
    pub fn show(&self, state: &State, name: &str) -> Option<String> {
        self.value_of(state, name).map(|v| self.format_value(v))
    }

    /// Lower an expression written over the top-level scope: qualified
    /// variable names, qualified DEFINE names and enumeration symbols.
    pub fn compile_expr(&self, e: &Expr) -> Result<(CExpr, Ty), Diagnostic> {
        let mut res = TopScope { ts: self };
        lower(e, &mut res, Position::Value)
    }

    /// Parse and lower a boolean expression over the top-level scope.
    pub fn compile_condition(&self, text: &str) -> Result<CExpr, Diagnostic> {
        let e = parse_expr(text).map_err(|err| {
            Diagnostic::error(
                Span {
                    line: err.line,
                    col: err.col,
                    ..Span::default()
                },
                err.to_string(),
            )
        })?;
        let (c, ty) = self.compile_expr(&e)?;
        if ty != Ty::Bool {
            return Err(Diagnostic::error(e.span, format!("expected boolean, found {ty}")));
        }
        Ok(c)
    }

    pub fn eval_expr(&self, e: &Expr, s: &State) -> Result<Value, EvalOrCompileError> {
        let (c, _) = self.compile_expr(e).map_err(EvalOrCompileError::Compile)?;
        c.eval(s.values()).map_err(EvalOrCompileError::Eval)
    }

    /// All states satisfying the init rules, in lexicographic order over the
    /// variable list (listed choice order for set literals, domain order for
    /// unconstrained variables).
    pub fn initial_states(&self) -> Vec<Successor> {
        let n = self.vars.len();
        let placeholder = Value::Bool(false);
        let mut results: Vec<(Vec<usize>, Successor)> = Vec::new();
        let mut values = vec![placeholder; n];
        let mut keys = vec![0usize; n];
        self.init_rec(0, &mut values, &mut keys, &mut results);
        results.sort_by(|a, b| a.0.cmp(&b.0));
        results.into_iter().map(|(_, s)| s).collect()
    }

    fn init_rec(
        &self,
        depth: usize,
        values: &mut Vec<Value>,
        keys: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Successor)>,
    ) {
        if depth == self.init_order.len() {
            let mut state = values.clone();
            let outcome = self.init_monitors(&mut state).map(|_| State(state));
            out.push((keys.clone(), outcome));
            return;
        }
        let var = self.init_order[depth];
        let info = &self.vars[var];
        let options = match &self.init_rules[var] {
            Some(rule) => {
                let mut opts = Vec::new();
                if let Err(e) = rule.eval_choices(values, &mut opts) {
                    out.push((keys.clone(), Err(self.eval_failure(var, AssignKind::Init, e))));
                    return;
                }
                opts
            }
            None => info.domain.values(),
        };
        for (k, v) in options.into_iter().enumerate() {
            if !info.domain.contains(v) {
                out.push((
                    keys.clone(),
                    Err(self.out_of_domain(var, AssignKind::Init, v)),
                ));
                continue;
            }
            values[var] = v;
            keys[var] = k;
            self.init_rec(depth + 1, values, keys, out);
        }
        keys[var] = 0;
    }

    fn init_monitors(&self, state: &mut [Value]) -> Result<(), ModelError> {
        for m in &self.monitors {
            let v = match m.kind {
                MonitorKind::Yesterday => false,
                MonitorKind::Once | MonitorKind::Historically => m
                    .operand
                    .eval_bool(state)
                    .map_err(|e| self.eval_failure(m.var, AssignKind::Init, e))?,
            };
            state[m.var] = Value::Bool(v);
        }
        Ok(())
    }

    /// Every state reachable in one synchronous step from `s`, in
    /// lexicographic order over the variable list. A rule that yields a value
    /// outside its variable's domain poisons the successors using that value.
    pub fn successors(&self, s: &State) -> Vec<Successor> {
        let cur = s.values();
        let n = self.vars.len();
        let mut options: Vec<Vec<Value>> = Vec::with_capacity(n);
        for (i, info) in self.vars.iter().enumerate() {
            if info.kind == VarKind::Monitor {
                options.push(vec![cur[i]]);
                continue;
            }
            match &self.next_rules[i] {
                Some(rule) => {
                    let mut opts = Vec::with_capacity(1);
                    if let Err(e) = rule.eval_choices(cur, &mut opts) {
                        return vec![Err(self.eval_failure(i, AssignKind::Next, e))];
                    }
                    options.push(opts);
                }
                None => options.push(info.domain.values()),
            }
        }

        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            let mut next: Vec<Value> = digits
                .iter()
                .zip(&options)
                .map(|(d, opts)| opts[*d])
                .collect();
            let poisoned = (0..n).find(|&i| {
                self.vars[i].kind == VarKind::State && !self.vars[i].domain.contains(next[i])
            });
            match poisoned {
                Some(i) => out.push(Err(self.out_of_domain(i, AssignKind::Next, next[i]))),
                None => match self.step_monitors(cur, &mut next) {
                    Ok(()) => out.push(Ok(State(next))),
                    Err(e) => out.push(Err(e)),
                },
            }
            // odometer: last variable varies fastest
            let mut pos = n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < options[pos].len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    fn step_monitors(&self, old: &[Value], new: &mut [Value]) -> Result<(), ModelError> {
        for m in &self.monitors {
            let prev = old[m.var] == Value::Bool(true);
            let fail = |e| self.eval_failure(m.var, AssignKind::Next, e);
            let v = match m.kind {
                MonitorKind::Once => prev || m.operand.eval_bool(new).map_err(fail)?,
                MonitorKind::Historically => prev && m.operand.eval_bool(new).map_err(fail)?,
                MonitorKind::Yesterday => m.operand.eval_bool(old).map_err(fail)?,
            };
            new[m.var] = Value::Bool(v);
        }
        Ok(())
    }

    /// Whether `to` is one of the successors of `from`.
    pub fn is_successor(&self, from: &State, to: &State) -> bool {
        self.successors(from)
            .iter()
            .any(|s| matches!(s, Ok(st) if st == to))
    }

    pub fn is_initial(&self, s: &State) -> bool {
        self.initial_states()
            .iter()
            .any(|st| matches!(st, Ok(x) if x == s))
    }

    fn eval_failure(&self, var: usize, kind: AssignKind, e: EvalError) -> ModelError {
        ModelError {
            var: self.vars[var].name.clone(),
            detail: format!("{kind} rule: {e}"),
        }
    }

    fn out_of_domain(&self, var: usize, kind: AssignKind, v: Value) -> ModelError {
        ModelError {
            var: self.vars[var].name.clone(),
            detail: format!(
                "{kind} rule yields {} outside the variable's domain",
                self.format_value(v)
            ),
        }
    }

    /// Add a fresh observer variable; its name must not be in use.
    pub fn add_monitor(&mut self, name: &str, kind: MonitorKind, operand: CExpr) -> usize {
        let var = self.vars.len();
        self.vars.push(VarInfo {
            name: name.to_string(),
            domain: Domain::Bool,
            kind: VarKind::Monitor,
        });
        self.init_rules.push(None);
        self.next_rules.push(None);
        self.index.insert(name.to_string(), var);
        self.monitors.push(Monitor { var, kind, operand });
        var
    }

    /// Keep only the variables of `self` in a state of an augmented copy of
    /// this system (one that appended monitor variables).
    pub fn project(&self, s: &State) -> State {
        State(s.0[..self.vars.len()].to_vec())
    }

    /// Variable dependency graph: for each variable the variables its rules
    /// read. Reported for diagnostics only.
    pub fn dependency_graph(&self) -> Vec<Vec<usize>> {
        (0..self.vars.len())
            .map(|i| {
                let mut deps = Vec::new();
                for rule in [&self.init_rules[i], &self.next_rules[i]].into_iter().flatten() {
                    deps.extend(rule.support());
                }
                if let Some(m) = self.monitors.iter().find(|m| m.var == i) {
                    deps.extend(m.operand.support());
                }
                deps.sort_unstable();
                deps.dedup();
                deps
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalOrCompileError {
    #[error("{0}")]
    Compile(Diagnostic),
    #[error("{0}")]
    Eval(EvalError),
}

struct TopScope<'a> {
    ts: &'a TransitionSystem,
}

impl Resolver for TopScope<'_> {
    fn resolve(&mut self, path: &[String], span: Span) -> Result<(CExpr, Ty), Diagnostic> {
        let name = path.join(".");
        if let Some(i) = self.ts.var_index(&name) {
            return Ok((CExpr::Var(i), self.ts.vars[i].domain.ty()));
        }
        if let Some((c, ty)) = self.ts.defines.get(&name) {
            return Ok((c.clone(), *ty));
        }
        if path.len() == 1 {
            if let Some(s) = self.ts.symbol(&name) {
                return Ok((CExpr::Const(Value::Sym(s)), Ty::Sym));
            }
        }
        Err(Diagnostic::error(
            span,
            format!("unresolved identifier `{name}`"),
        ))
    }
}
