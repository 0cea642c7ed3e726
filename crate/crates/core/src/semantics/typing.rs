//! Type checking and lowering of syntax-tree expressions to [`CExpr`].

use crate::lang::ast::{BinOp, Expr, ExprKind, Span, UnOp};
use crate::lang::{expr_to_string, Diagnostic};

use super::expr::CExpr;
use super::value::{Ty, Value};

/// Name resolution for one scope.
pub(crate) trait Resolver {
    fn resolve(&mut self, path: &[String], span: Span) -> Result<(CExpr, Ty), Diagnostic>;
}

/// Where a set literal may appear.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Position {
    /// Ordinary expression.
    Value,
    /// Right-hand side of an init/next rule (or an arm value of a case that
    /// is itself in rule position).
    Rule,
}

pub(crate) fn lower(
    e: &Expr,
    res: &mut dyn Resolver,
    pos: Position,
) -> Result<(CExpr, Ty), Diagnostic> {
    match &e.kind {
        ExprKind::Bool(b) => Ok((CExpr::Const(Value::Bool(*b)), Ty::Bool)),
        ExprKind::Int(v) => Ok((CExpr::Const(Value::Int(*v)), Ty::Int)),
        ExprKind::Ref(path) => res.resolve(path, e.span),
        ExprKind::Unary(op, inner) => {
            let (c, ty) = lower(inner, res, Position::Value)?;
            let want = match op {
                UnOp::Not => Ty::Bool,
                UnOp::Neg => Ty::Int,
            };
            expect_ty(inner, ty, want)?;
            Ok((CExpr::Unary(*op, Box::new(c)).fold(), want))
        }
        ExprKind::Binary(op, l, r) => {
            let (lc, lt) = lower(l, res, Position::Value)?;
            let (rc, rt) = lower(r, res, Position::Value)?;
            let ty = match op {
                BinOp::And | BinOp::Or | BinOp::Implies => {
                    expect_ty(l, lt, Ty::Bool)?;
                    expect_ty(r, rt, Ty::Bool)?;
                    Ty::Bool
                }
                BinOp::Eq | BinOp::Ne => {
                    expect_ty(r, rt, lt)?;
                    Ty::Bool
                }
                BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                    expect_ty(l, lt, Ty::Int)?;
                    expect_ty(r, rt, Ty::Int)?;
                    Ty::Bool
                }
                BinOp::Add | BinOp::Sub => {
                    expect_ty(l, lt, Ty::Int)?;
                    expect_ty(r, rt, Ty::Int)?;
                    Ty::Int
                }
            };
            Ok((CExpr::Bin(*op, Box::new(lc), Box::new(rc)).fold(), ty))
        }
        ExprKind::Case(arms) => {
            let mut out = Vec::with_capacity(arms.len());
            let mut result_ty: Option<Ty> = None;
            for arm in arms {
                let (g, gt) = lower(&arm.guard, res, Position::Value)?;
                expect_ty(&arm.guard, gt, Ty::Bool)?;
                let (v, vt) = lower(&arm.value, res, pos)?;
                match result_ty {
                    None => result_ty = Some(vt),
                    Some(t) => expect_ty(&arm.value, vt, t)?,
                }
                out.push((g, v));
            }
            let ty = result_ty.unwrap_or(Ty::Bool);
            Ok((CExpr::Case(out).fold(), ty))
        }
        ExprKind::Set(items) => {
            if pos != Position::Rule {
                return Err(Diagnostic::error(
                    e.span,
                    "set literal is only allowed as the value of an init/next rule",
                ));
            }
            let mut out = Vec::with_capacity(items.len());
            let mut ty: Option<Ty> = None;
            for item in items {
                let (c, t) = lower(item, res, Position::Value)?;
                match ty {
                    None => ty = Some(t),
                    Some(want) => expect_ty(item, t, want)?,
                }
                out.push(c);
            }
            Ok((CExpr::Set(out), ty.unwrap_or(Ty::Bool)))
        }
    }
}

fn expect_ty(e: &Expr, got: Ty, want: Ty) -> Result<(), Diagnostic> {
    if got == want {
        Ok(())
    } else {
        Err(Diagnostic::error(
            e.span,
            format!(
                "type mismatch in `{}`: expected {want}, found {got}",
                expr_to_string(e)
            ),
        ))
    }
}
