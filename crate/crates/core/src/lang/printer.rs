//! Canonical source rendering of a [`ModelAst`].

use std::fmt::Write;

use super::ast::*;

pub fn pretty_print(ast: &ModelAst) -> String {
    let mut out = String::new();
    for (i, module) in ast.modules.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_module(&mut out, module);
    }
    out
}

fn print_module(out: &mut String, m: &ModuleDecl) {
    out.push_str("MODULE ");
    out.push_str(&m.name.name);
    if !m.params.is_empty() {
        let params: Vec<&str> = m.params.iter().map(|p| p.name.as_str()).collect();
        let _ = write!(out, "({})", params.join(", "));
    }
    out.push('\n');

    if !m.vars.is_empty() || !m.instances.is_empty() {
        out.push_str("VAR\n");
        for v in &m.vars {
            let _ = writeln!(out, "  {} : {};", v.name.name, type_to_string(&v.ty));
        }
        for inst in &m.instances {
            let _ = write!(out, "  {} : {}", inst.name.name, inst.module.name);
            if !inst.args.is_empty() {
                let args: Vec<String> = inst.args.iter().map(expr_to_string).collect();
                let _ = write!(out, "({})", args.join(", "));
            }
            out.push_str(";\n");
        }
    }
    if !m.defines.is_empty() {
        out.push_str("DEFINE\n");
        for d in &m.defines {
            let _ = writeln!(out, "  {} := {};", d.name.name, block_expr(&d.expr, 2));
        }
    }
    if !m.assigns.is_empty() {
        out.push_str("ASSIGN\n");
        for a in &m.assigns {
            let _ = writeln!(
                out,
                "  {}({}) := {};",
                a.kind,
                a.target.name,
                block_expr(&a.expr, 2)
            );
        }
    }
}

pub fn type_to_string(ty: &VarType) -> String {
    match ty {
        VarType::Boolean => "boolean".to_string(),
        VarType::Enum(symbols) => {
            let names: Vec<&str> = symbols.iter().map(|s| s.name.as_str()).collect();
            format!("{{{}}}", names.join(", "))
        }
        VarType::Range(lo, hi) => format!(
            "{}..{}",
            expr_prec(lo, BinOp::Add.precedence() + 1),
            expr_prec(hi, BinOp::Add.precedence() + 1)
        ),
    }
}

/// Top-level case expressions are laid out one arm per line.
fn block_expr(e: &Expr, indent: usize) -> String {
    match &e.kind {
        ExprKind::Case(arms) => {
            let pad = " ".repeat(indent + 2);
            let mut s = String::from("case\n");
            for arm in arms {
                let _ = writeln!(
                    s,
                    "{pad}{} : {};",
                    expr_to_string(&arm.guard),
                    expr_to_string(&arm.value)
                );
            }
            s.push_str(&" ".repeat(indent));
            s.push_str("esac");
            s
        }
        _ => expr_to_string(e),
    }
}

pub fn expr_to_string(e: &Expr) -> String {
    expr_prec(e, 0)
}

/// Render `e` so that it parses back to the same tree when it appears in a
/// context requiring binding strength of at least `min`.
fn expr_prec(e: &Expr, min: u8) -> String {
    match &e.kind {
        ExprKind::Bool(true) => "TRUE".into(),
        ExprKind::Bool(false) => "FALSE".into(),
        ExprKind::Int(v) => v.to_string(),
        ExprKind::Ref(path) => path.join("."),
        ExprKind::Unary(op, inner) => {
            let body = match (&inner.kind, op) {
                (ExprKind::Unary(UnOp::Neg, _), UnOp::Neg) => format!("({})", expr_prec(inner, 0)),
                _ => expr_prec(inner, 6),
            };
            let s = match op {
                UnOp::Not => format!("!{body}"),
                UnOp::Neg => format!("-{body}"),
            };
            // unary binds tighter than every binary operator
            s
        }
        ExprKind::Binary(op, l, r) => {
            let p = op.precedence();
            let (lmin, rmin) = match op {
                BinOp::Implies => (p + 1, p),
                _ if op.is_comparison() => (p + 1, p + 1),
                _ => (p, p + 1),
            };
            let s = format!(
                "{} {} {}",
                expr_prec(l, lmin),
                op.symbol(),
                expr_prec(r, rmin)
            );
            if p < min {
                format!("({s})")
            } else {
                s
            }
        }
        ExprKind::Case(arms) => {
            let mut s = String::from("case ");
            for arm in arms {
                let _ = write!(
                    s,
                    "{} : {}; ",
                    expr_to_string(&arm.guard),
                    expr_to_string(&arm.value)
                );
            }
            s.push_str("esac");
            s
        }
        ExprKind::Set(items) => {
            let parts: Vec<String> = items.iter().map(expr_to_string).collect();
            format!("{{{}}}", parts.join(", "))
        }
    }
}
