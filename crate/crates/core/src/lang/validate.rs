//! Static well-formedness checks.
//!
//! Structural rules (module naming, instantiation graph, rule counts, case
//! defaults) are checked here directly; name resolution and typing are
//! delegated to elaboration so that both agree on what a model means.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::Diagnostic;
use crate::semantics::elaborate;

/// All diagnostics for `ast`; empty iff the model is well-formed.
pub fn validate_model(ast: &ModelAst) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    structural(ast, &mut diags);
    if diags.iter().any(Diagnostic::is_error) {
        return diags;
    }
    if let Err(e) = elaborate(ast) {
        diags.extend(e.diagnostics);
    }
    diags
}

fn structural(ast: &ModelAst, diags: &mut Vec<Diagnostic>) {
    let mains: Vec<&ModuleDecl> = ast.modules.iter().filter(|m| m.name.name == "main").collect();
    match mains.len() {
        0 => diags.push(Diagnostic::error(Span::default(), "no module named `main`")),
        1 => {}
        _ => diags.push(Diagnostic::error(mains[1].name.span, "duplicate main")),
    }
    if let Some(main) = mains.first() {
        if !main.params.is_empty() {
            diags.push(Diagnostic::error(
                main.name.span,
                "module `main` must not take parameters",
            ));
        }
    }

    let mut seen = HashSet::new();
    for m in &ast.modules {
        if m.name.name != "main" && !seen.insert(m.name.name.as_str()) {
            diags.push(Diagnostic::error(
                m.name.span,
                format!("duplicate module `{}`", m.name.name),
            ));
        }
    }

    for m in &ast.modules {
        module_checks(ast, m, diags);
    }
    instantiation_cycles(ast, diags);
}

fn module_checks(ast: &ModelAst, m: &ModuleDecl, diags: &mut Vec<Diagnostic>) {
    let mut names: HashMap<&str, Span> = HashMap::new();
    let declared = m
        .params
        .iter()
        .chain(m.vars.iter().map(|v| &v.name))
        .chain(m.defines.iter().map(|d| &d.name))
        .chain(m.instances.iter().map(|i| &i.name));
    for id in declared {
        if names.insert(id.name.as_str(), id.span).is_some() {
            diags.push(Diagnostic::error(
                id.span,
                format!("`{}` is declared more than once in module `{}`", id.name, m.name.name),
            ));
        }
    }

    for v in &m.vars {
        if let VarType::Enum(syms) = &v.ty {
            let mut uniq = HashSet::new();
            for s in syms {
                if !uniq.insert(s.name.as_str()) {
                    diags.push(Diagnostic::error(
                        s.span,
                        format!("symbol `{}` repeated in the type of `{}`", s.name, v.name.name),
                    ));
                }
            }
            if uniq.len() < 2 {
                diags.push(Diagnostic::error(
                    v.span,
                    format!("enumeration type of `{}` needs at least two symbols", v.name.name),
                ));
            }
        }
    }

    for inst in &m.instances {
        match ast.module(&inst.module.name) {
            None => diags.push(Diagnostic::error(
                inst.module.span,
                format!("unknown module `{}`", inst.module.name),
            )),
            Some(target) if target.params.len() != inst.args.len() => {
                diags.push(Diagnostic::error(
                    inst.span,
                    format!(
                        "module `{}` expects {} argument(s), got {}",
                        target.name.name,
                        target.params.len(),
                        inst.args.len()
                    ),
                ))
            }
            Some(_) => {}
        }
    }

    let mut rules: HashSet<(AssignKind, &str)> = HashSet::new();
    for rule in &m.assigns {
        if !m.vars.iter().any(|v| v.name.name == rule.target.name) {
            diags.push(Diagnostic::error(
                rule.target.span,
                format!(
                    "`{}` is not a variable of module `{}`",
                    rule.target.name, m.name.name
                ),
            ));
        } else if !rules.insert((rule.kind, rule.target.name.as_str())) {
            diags.push(Diagnostic::error(
                rule.span,
                format!("duplicate {}({}) rule", rule.kind, rule.target.name),
            ));
        }
    }

    let mut exprs: Vec<&Expr> = Vec::new();
    for v in &m.vars {
        if let VarType::Range(lo, hi) = &v.ty {
            exprs.push(lo);
            exprs.push(hi);
        }
    }
    exprs.extend(m.defines.iter().map(|d| &d.expr));
    exprs.extend(m.assigns.iter().map(|a| &a.expr));
    for i in &m.instances {
        exprs.extend(i.args.iter());
    }
    for e in exprs {
        e.walk(&mut |sub| {
            if let ExprKind::Case(arms) = &sub.kind {
                if !arms.last().is_some_and(|a| a.guard.is_true_literal()) {
                    diags.push(Diagnostic::error(
                        sub.span,
                        "case expression must end with a default arm `TRUE : ...`",
                    ));
                }
            }
        });
    }
}

fn instantiation_cycles(ast: &ModelAst, diags: &mut Vec<Diagnostic>) {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Unvisited,
        Active,
        Done,
    }
    let index: HashMap<&str, usize> = ast
        .modules
        .iter()
        .enumerate()
        .rev()
        .map(|(i, m)| (m.name.name.as_str(), i))
        .collect();
    let mut marks = vec![Mark::Unvisited; ast.modules.len()];

    fn visit(
        ast: &ModelAst,
        index: &HashMap<&str, usize>,
        marks: &mut [Mark],
        i: usize,
        diags: &mut Vec<Diagnostic>,
    ) {
        marks[i] = Mark::Active;
        for inst in &ast.modules[i].instances {
            let Some(&j) = index.get(inst.module.name.as_str()) else {
                continue;
            };
            match marks[j] {
                Mark::Active => diags.push(Diagnostic::error(
                    inst.span,
                    format!("recursive instantiation of module `{}`", inst.module.name),
                )),
                Mark::Unvisited => visit(ast, index, marks, j, diags),
                Mark::Done => {}
            }
        }
        marks[i] = Mark::Done;
    }

    for i in 0..ast.modules.len() {
        if marks[i] == Mark::Unvisited {
            visit(ast, &index, &mut marks, i, diags);
        }
    }
}
