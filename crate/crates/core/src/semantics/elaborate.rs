//! Flattening of the module hierarchy into a [`TransitionSystem`].
//!
//! Parameters are bound by expression aliasing: a parameter occurrence is
//! replaced by the caller's argument, compiled in the caller's scope and
//! read on the current state. An argument that names an instance binds the
//! parameter to that instance so that `Param.member` reaches its DEFINEs
//! and (read-only) its variables.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::lang::ast::*;
use crate::lang::Diagnostic;

use super::expr::CExpr;
use super::system::{ChoicePoint, TransitionSystem, VarInfo, VarKind};
use super::typing::{lower, Position, Resolver};
use super::value::{Domain, SymId, Ty, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("elaboration failed: {}", .diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ElabError {
    pub diagnostics: Vec<Diagnostic>,
}

const MAX_DEPTH: usize = 64;

pub fn elaborate(ast: &ModelAst) -> Result<TransitionSystem, ElabError> {
    let Some(main) = ast.main() else {
        return Err(ElabError {
            diagnostics: vec![Diagnostic::error(Span::default(), "no module named `main`")],
        });
    };
    let mut elab = Elab::new(ast);
    elab.run(main);
    elab.finish()
}

#[derive(Clone, Copy)]
enum Binding<'a> {
    Instance(usize),
    Expr(&'a Expr),
    Unbound,
}

struct Inst<'a> {
    module: &'a ModuleDecl,
    path: String,
    parent: Option<usize>,
    args: Vec<Binding<'a>>,
    children: HashMap<&'a str, usize>,
    var_base: usize,
}

enum Target {
    Var(usize),
    Define(usize, String),
    Param(usize, usize),
    Instance(usize),
}

struct Elab<'a> {
    ast: &'a ModelAst,
    insts: Vec<Inst<'a>>,
    diags: Vec<Diagnostic>,
    vars: Vec<VarInfo>,
    symbols: Vec<String>,
    sym_index: HashMap<String, SymId>,
    define_memo: HashMap<(usize, String), Result<(CExpr, Ty), Diagnostic>>,
    define_active: Vec<(usize, String)>,
    param_memo: HashMap<(usize, usize), Result<(CExpr, Ty), Diagnostic>>,
}

impl<'a> Elab<'a> {
    fn new(ast: &'a ModelAst) -> Self {
        let mut symbols = Vec::new();
        let mut sym_index = HashMap::new();
        for m in &ast.modules {
            for v in &m.vars {
                if let VarType::Enum(syms) = &v.ty {
                    for s in syms {
                        if !sym_index.contains_key(&s.name) {
                            sym_index.insert(s.name.clone(), SymId(symbols.len() as u32));
                            symbols.push(s.name.clone());
                        }
                    }
                }
            }
        }
        Elab {
            ast,
            insts: Vec::new(),
            diags: Vec::new(),
            vars: Vec::new(),
            symbols,
            sym_index,
            define_memo: HashMap::new(),
            define_active: Vec::new(),
            param_memo: HashMap::new(),
        }
    }

    fn error(&mut self, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(span, msg));
    }

    fn run(&mut self, main: &'a ModuleDecl) {
        if !main.params.is_empty() {
            self.error(main.name.span, "module `main` must not take parameters");
        }
        self.insts.push(Inst {
            module: main,
            path: String::new(),
            parent: None,
            args: Vec::new(),
            children: HashMap::new(),
            var_base: 0,
        });
        self.build_tree(0, &mut vec![main.name.name.as_str()]);
        if self.diags.iter().any(Diagnostic::is_error) {
            return;
        }
        self.allocate_vars(0);
    }

    fn qualify(&self, inst: usize, name: &str) -> String {
        let path = &self.insts[inst].path;
        if path.is_empty() {
            name.to_string()
        } else {
            format!("{path}.{name}")
        }
    }

    fn build_tree(&mut self, id: usize, stack: &mut Vec<&'a str>) {
        let module = self.insts[id].module;
        if stack.len() > MAX_DEPTH {
            self.error(module.span, "instantiation nesting too deep");
            return;
        }
        let mut created = Vec::new();
        for decl in &module.instances {
            let Some(child_mod) = self.ast.module(&decl.module.name) else {
                self.error(
                    decl.module.span,
                    format!("unknown module `{}`", decl.module.name),
                );
                continue;
            };
            if stack.contains(&child_mod.name.name.as_str()) {
                self.error(
                    decl.span,
                    format!(
                        "recursive instantiation of module `{}`",
                        child_mod.name.name
                    ),
                );
                continue;
            }
            if decl.args.len() != child_mod.params.len() {
                self.error(
                    decl.span,
                    format!(
                        "module `{}` expects {} argument(s), got {}",
                        child_mod.name.name,
                        child_mod.params.len(),
                        decl.args.len()
                    ),
                );
                continue;
            }
            let child = self.insts.len();
            let path = self.qualify(id, &decl.name.name);
            self.insts.push(Inst {
                module: child_mod,
                path,
                parent: Some(id),
                args: vec![Binding::Unbound; decl.args.len()],
                children: HashMap::new(),
                var_base: 0,
            });
            self.insts[id].children.insert(decl.name.name.as_str(), child);
            created.push((child, decl));
        }
        // bind arguments once all siblings exist
        for (child, decl) in &created {
            let args: Vec<Binding<'a>> = decl
                .args
                .iter()
                .map(|arg| match &arg.kind {
                    ExprKind::Ref(path) => match self.lookup(id, path) {
                        Some(Target::Instance(i)) => Binding::Instance(i),
                        _ => Binding::Expr(arg),
                    },
                    _ => Binding::Expr(arg),
                })
                .collect();
            self.insts[*child].args = args;
        }
        for (child, _) in created {
            let name = self.insts[child].module.name.name.as_str();
            stack.push(name);
            self.build_tree(child, stack);
            stack.pop();
        }
    }

    fn allocate_vars(&mut self, id: usize) {
        self.insts[id].var_base = self.vars.len();
        let module = self.insts[id].module;
        for v in &module.vars {
            let name = self.qualify(id, &v.name.name);
            self.vars.push(VarInfo {
                name,
                domain: Domain::Bool,
                kind: VarKind::State,
            });
        }
        let mut children: Vec<(usize, usize)> = module
            .instances
            .iter()
            .enumerate()
            .filter_map(|(k, d)| self.insts[id].children.get(d.name.name.as_str()).map(|c| (k, *c)))
            .collect();
        children.sort();
        for (_, child) in children {
            self.allocate_vars(child);
        }
    }

    /// Resolve a (dotted) name in the scope of instance `id` without
    /// compiling anything.
    fn lookup(&self, id: usize, path: &[String]) -> Option<Target> {
        let inst = &self.insts[id];
        let module = inst.module;
        let first = path[0].as_str();
        let mut target = if let Some(k) = module.vars.iter().position(|v| v.name.name == first) {
            Target::Var(inst.var_base + k)
        } else if module.defines.iter().any(|d| d.name.name == first) {
            Target::Define(id, first.to_string())
        } else if let Some(c) = inst.children.get(first) {
            Target::Instance(*c)
        } else if let Some(k) = module.params.iter().position(|p| p.name == first) {
            match inst.args.get(k) {
                Some(Binding::Instance(i)) => Target::Instance(*i),
                _ => Target::Param(id, k),
            }
        } else {
            return None;
        };
        for seg in &path[1..] {
            let Target::Instance(i) = target else {
                return None;
            };
            let inst = &self.insts[i];
            let m = inst.module;
            target = if let Some(k) = m.vars.iter().position(|v| v.name.name == *seg) {
                Target::Var(inst.var_base + k)
            } else if m.defines.iter().any(|d| d.name.name == *seg) {
                Target::Define(i, seg.clone())
            } else if let Some(c) = inst.children.get(seg.as_str()) {
                Target::Instance(*c)
            } else {
                return None;
            };
        }
        Some(target)
    }

    fn resolve(&mut self, id: usize, path: &[String], span: Span) -> Result<(CExpr, Ty), Diagnostic> {
        let name = path.join(".");
        match self.lookup(id, path) {
            Some(Target::Var(v)) => Ok((CExpr::Var(v), self.vars[v].domain.ty())),
            Some(Target::Define(i, d)) => self.compile_define(i, &d, span),
            Some(Target::Param(i, k)) => self.compile_param(i, k),
            Some(Target::Instance(_)) => Err(Diagnostic::error(
                span,
                format!("instance `{name}` cannot be used as a value"),
            )),
            None => {
                if path.len() == 1 {
                    if let Some(s) = self.sym_index.get(&name) {
                        return Ok((CExpr::Const(Value::Sym(*s)), Ty::Sym));
                    }
                }
                Err(Diagnostic::error(span, format!("unresolved identifier `{name}`")))
            }
        }
    }

    fn compile_define(&mut self, id: usize, name: &str, span: Span) -> Result<(CExpr, Ty), Diagnostic> {
        let key = (id, name.to_string());
        if let Some(r) = self.define_memo.get(&key) {
            return r.clone();
        }
        if let Some(pos) = self.define_active.iter().position(|k| *k == key) {
            let cycle: Vec<String> = self.define_active[pos..]
                .iter()
                .chain(std::iter::once(&key))
                .map(|(i, n)| self.qualify(*i, n))
                .collect();
            return Err(Diagnostic::error(
                span,
                format!("combinational cycle among defines: {}", cycle.join(" -> ")),
            ));
        }
        let module = self.insts[id].module;
        let decl = module
            .defines
            .iter()
            .find(|d| d.name.name == name)
            .expect("lookup found define");
        self.define_active.push(key.clone());
        let result = lower(&decl.expr, &mut Scope { elab: self, inst: id }, Position::Value);
        self.define_active.pop();
        self.define_memo.insert(key, result.clone());
        result
    }

    fn compile_param(&mut self, id: usize, k: usize) -> Result<(CExpr, Ty), Diagnostic> {
        if let Some(r) = self.param_memo.get(&(id, k)) {
            return r.clone();
        }
        let parent = self.insts[id].parent.expect("parameters only exist below main");
        let result = match self.insts[id].args[k] {
            Binding::Expr(e) => lower(e, &mut Scope { elab: self, inst: parent }, Position::Value),
            Binding::Instance(_) | Binding::Unbound => Err(Diagnostic::error(
                self.insts[id].module.params[k].span,
                "parameter is not bound to a value",
            )),
        };
        self.param_memo.insert((id, k), result.clone());
        result
    }

    fn const_int(&mut self, id: usize, e: &Expr) -> Option<i64> {
        match lower(e, &mut Scope { elab: self, inst: id }, Position::Value) {
            Ok((CExpr::Const(Value::Int(v)), _)) => Some(v),
            Ok(_) => {
                self.error(
                    e.span,
                    "range bound does not resolve to an integer constant",
                );
                None
            }
            Err(d) => {
                self.diags.push(d);
                None
            }
        }
    }

    fn finish(mut self) -> Result<TransitionSystem, ElabError> {
        if self.diags.iter().any(Diagnostic::is_error) {
            return Err(ElabError {
                diagnostics: dedup(self.diags),
            });
        }
        let n = self.vars.len();
        let mut init_rules: Vec<Option<CExpr>> = vec![None; n];
        let mut next_rules: Vec<Option<CExpr>> = vec![None; n];
        let mut choice_points = Vec::new();
        let mut defines = BTreeMap::new();

        // domains
        for id in 0..self.insts.len() {
            let module = self.insts[id].module;
            let base = self.insts[id].var_base;
            for (k, v) in module.vars.iter().enumerate() {
                let domain = match &v.ty {
                    VarType::Boolean => Domain::Bool,
                    VarType::Enum(syms) => {
                        Domain::Enum(syms.iter().map(|s| self.sym_index[&s.name]).collect())
                    }
                    VarType::Range(lo, hi) => {
                        let lo_v = self.const_int(id, lo);
                        let hi_v = self.const_int(id, hi);
                        match (lo_v, hi_v) {
                            (Some(l), Some(h)) if l <= h => Domain::Range(l, h),
                            (Some(l), Some(h)) => {
                                self.error(v.span, format!("empty range {l}..{h}"));
                                Domain::Bool
                            }
                            _ => Domain::Bool,
                        }
                    }
                };
                self.vars[base + k].domain = domain;
            }
        }

        // rules
        for id in 0..self.insts.len() {
            let module = self.insts[id].module;
            let base = self.insts[id].var_base;
            for rule in &module.assigns {
                let Some(k) = module.vars.iter().position(|v| v.name.name == rule.target.name)
                else {
                    self.error(
                        rule.target.span,
                        format!(
                            "`{}` is not a variable of module `{}`",
                            rule.target.name, module.name.name
                        ),
                    );
                    continue;
                };
                let var = base + k;
                let slot = match rule.kind {
                    AssignKind::Init => &init_rules[var],
                    AssignKind::Next => &next_rules[var],
                };
                if slot.is_some() {
                    let msg = format!("duplicate {}({}) rule", rule.kind, rule.target.name);
                    self.error(rule.span, msg);
                    continue;
                }
                match lower(&rule.expr, &mut Scope { elab: &mut self, inst: id }, Position::Rule) {
                    Ok((c, ty)) => {
                        let domain = self.vars[var].domain.clone();
                        if ty != domain.ty() {
                            self.error(
                                rule.expr.span,
                                format!(
                                    "{}({}) assigns {ty} to a variable of type {}",
                                    rule.kind,
                                    rule.target.name,
                                    domain.ty()
                                ),
                            );
                            continue;
                        }
                        if let Domain::Enum(syms) = &domain {
                            for v in rule_constants(&c) {
                                if let Value::Sym(s) = v {
                                    if !syms.contains(&s) {
                                        let msg = format!(
                                            "symbol `{}` is not in the domain of `{}`",
                                            self.symbols[s.0 as usize], rule.target.name
                                        );
                                        self.error(rule.expr.span, msg);
                                    }
                                }
                            }
                        }
                        rule.expr.walk(&mut |e| {
                            if matches!(e.kind, ExprKind::Set(_)) {
                                choice_points.push(ChoicePoint {
                                    var,
                                    rule: rule.kind,
                                    span: e.span,
                                });
                            }
                        });
                        match rule.kind {
                            AssignKind::Init => init_rules[var] = Some(c),
                            AssignKind::Next => next_rules[var] = Some(c),
                        }
                    }
                    Err(d) => self.diags.push(d),
                }
            }
        }

        // every define, including unused ones
        for id in 0..self.insts.len() {
            let module = self.insts[id].module;
            for d in &module.defines {
                match self.compile_define(id, &d.name.name, d.name.span) {
                    Ok(compiled) => {
                        defines.insert(self.qualify(id, &d.name.name), compiled);
                    }
                    Err(diag) => self.diags.push(diag),
                }
            }
        }

        let init_order = match init_order(&init_rules) {
            Some(order) => order,
            None => {
                self.error(
                    self.insts[0].module.span,
                    "cyclic dependency among init rules",
                );
                Vec::new()
            }
        };

        if self.diags.iter().any(Diagnostic::is_error) {
            return Err(ElabError {
                diagnostics: dedup(self.diags),
            });
        }

        let index = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.clone(), i))
            .collect();
        Ok(TransitionSystem {
            vars: self.vars,
            init_rules,
            next_rules,
            choice_points,
            defines,
            symbols: self.symbols,
            monitors: Vec::new(),
            step_duration_ms: 10,
            index,
            sym_index: self.sym_index,
            init_order,
        })
    }
}

struct Scope<'e, 'a> {
    elab: &'e mut Elab<'a>,
    inst: usize,
}

impl Resolver for Scope<'_, '_> {
    fn resolve(&mut self, path: &[String], span: Span) -> Result<(CExpr, Ty), Diagnostic> {
        self.elab.resolve(self.inst, path, span)
    }
}

/// Constant values a rule may produce (set items and case arm results).
fn rule_constants(c: &CExpr) -> Vec<Value> {
    match c {
        CExpr::Const(v) => vec![*v],
        CExpr::Set(items) => items.iter().flat_map(rule_constants).collect(),
        CExpr::Case(arms) => arms.iter().flat_map(|(_, v)| rule_constants(v)).collect(),
        _ => Vec::new(),
    }
}

/// Topological order of variables for initial-state construction; `None`
/// on a cycle.
fn init_order(init_rules: &[Option<CExpr>]) -> Option<Vec<usize>> {
    let n = init_rules.len();
    let deps: Vec<Vec<usize>> = init_rules
        .iter()
        .map(|r| r.as_ref().map(|c| c.support()).unwrap_or_default())
        .collect();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut visiting = HashSet::new();
    fn visit(
        v: usize,
        deps: &[Vec<usize>],
        placed: &mut [bool],
        visiting: &mut HashSet<usize>,
        order: &mut Vec<usize>,
    ) -> bool {
        if placed[v] {
            return true;
        }
        if !visiting.insert(v) {
            return false;
        }
        for &d in &deps[v] {
            if !visit(d, deps, placed, visiting, order) {
                return false;
            }
        }
        visiting.remove(&v);
        placed[v] = true;
        order.push(v);
        true
    }
    for v in 0..n {
        if !visit(v, &deps, &mut placed, &mut visiting, &mut order) {
            return None;
        }
    }
    Some(order)
}

fn dedup(diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
    let mut seen = HashSet::new();
    diags
        .into_iter()
        .filter(|d| seen.insert((d.span.start, d.span.end, d.message.clone())))
        .collect()
}
