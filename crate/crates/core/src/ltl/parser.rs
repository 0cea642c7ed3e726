//! Formula parser on top of the model-language tokenizer.

use crate::lang::lexer::TokenKind;
use crate::lang::{expr_to_string, Diagnostic, ParseError, Parser};
use crate::semantics::{TransitionSystem, Ty};

use super::Ltl;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LtlError {
    #[error("syntax error at {0}")]
    Syntax(ParseError),
    #[error("{0}")]
    Atom(Diagnostic),
}

const UNARY: &[&str] = &["X", "F", "G", "O", "Y", "H"];

/// Parse `text` and resolve its atoms against `ts` (qualified variable
/// names, qualified DEFINE names, enumeration symbols).
pub fn parse_ltl(text: &str, ts: &TransitionSystem) -> Result<Ltl, LtlError> {
    let parser = Parser::new(text).map_err(LtlError::Syntax)?;
    let mut p = LtlParser { p: parser, ts };
    let f = p.implies()?;
    p.p.expect(TokenKind::Eof).map_err(LtlError::Syntax)?;
    Ok(f)
}

struct LtlParser<'a> {
    p: Parser,
    ts: &'a TransitionSystem,
}

fn op_name(kind: &TokenKind) -> Option<&str> {
    match kind {
        TokenKind::Ident(name) if UNARY.contains(&name.as_str()) => Some(name.as_str()),
        _ => None,
    }
}

impl LtlParser<'_> {
    fn syntax<T>(&self, expected: &[&str]) -> Result<T, LtlError> {
        Err(LtlError::Syntax(self.p.error_expected(expected)))
    }

    fn implies(&mut self) -> Result<Ltl, LtlError> {
        let lhs = self.or()?;
        if self.p.eat(&TokenKind::Arrow).is_some() {
            let rhs = self.implies()?;
            return Ok(Ltl::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Ltl, LtlError> {
        let mut lhs = self.and()?;
        while self.p.eat(&TokenKind::Bar).is_some() {
            lhs = Ltl::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Ltl, LtlError> {
        let mut lhs = self.until()?;
        while self.p.eat(&TokenKind::Amp).is_some() {
            lhs = Ltl::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Ltl, LtlError> {
        let lhs = self.unary()?;
        let is_until = match &self.p.peek().kind {
            TokenKind::Ident(n) if n == "U" => true,
            TokenKind::Ident(n) if n == "R" => false,
            _ => return Ok(lhs),
        };
        self.p.bump();
        let rhs = self.until()?;
        Ok(if is_until {
            Ltl::Until(Box::new(lhs), Box::new(rhs))
        } else {
            Ltl::Release(Box::new(lhs), Box::new(rhs))
        })
    }

    fn window(&mut self) -> Result<(u32, u32), LtlError> {
        self.p.expect(TokenKind::LBracket).map_err(LtlError::Syntax)?;
        let lo = self.bound()?;
        self.p.expect(TokenKind::Comma).map_err(LtlError::Syntax)?;
        let hi_tok = self.p.peek().span;
        let hi = self.bound()?;
        self.p.expect(TokenKind::RBracket).map_err(LtlError::Syntax)?;
        if lo > hi {
            return Err(LtlError::Syntax(ParseError {
                line: hi_tok.line,
                col: hi_tok.col,
                message: format!("window [{lo},{hi}] is empty"),
                expected: vec![],
            }));
        }
        Ok((lo, hi))
    }

    fn bound(&mut self) -> Result<u32, LtlError> {
        match self.p.peek().kind {
            TokenKind::Int(v) if (0..=u32::MAX as i64).contains(&v) => {
                self.p.bump();
                Ok(v as u32)
            }
            _ => self.syntax(&["non-negative integer"]),
        }
    }

    fn unary(&mut self) -> Result<Ltl, LtlError> {
        if self.p.eat(&TokenKind::Bang).is_some() {
            return Ok(Ltl::not(self.unary()?));
        }
        if let Some(op) = op_name(&self.p.peek().kind).map(str::to_string) {
            self.p.bump();
            let windowed = (op == "F" || op == "G") && self.p.at(&TokenKind::LBracket);
            let window = if windowed { Some(self.window()?) } else { None };
            let a = Box::new(self.unary()?);
            return Ok(match (op.as_str(), window) {
                ("X", _) => Ltl::Next(a),
                ("F", None) => Ltl::Finally(a),
                ("G", None) => Ltl::Globally(a),
                ("F", Some((lo, hi))) => Ltl::BoundedF(lo, hi, a),
                ("G", Some((lo, hi))) => Ltl::BoundedG(lo, hi, a),
                ("O", _) => Ltl::Once(a),
                ("Y", _) => Ltl::Yesterday(a),
                _ => Ltl::Historically(a),
            });
        }
        if self.p.at(&TokenKind::LParen) {
            let save = self.p.pos;
            self.p.bump();
            let inner_err = match self.implies() {
                Ok(inner) => {
                    if self.p.eat(&TokenKind::RParen).is_some()
                        && !continues_expression(&self.p.peek().kind)
                    {
                        return Ok(inner);
                    }
                    None
                }
                Err(e) => Some(e),
            };
            // `(a + 1) = b` and similar: the parenthesis belongs to an atom
            self.p.pos = save;
            return match (self.atom(), inner_err) {
                // neither reading works; the formula reading explains more
                (Err(LtlError::Syntax(_)), Some(e)) => Err(e),
                (r, _) => r,
            };
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Ltl, LtlError> {
        match &self.p.peek().kind {
            TokenKind::Eof
            | TokenKind::RParen
            | TokenKind::Amp
            | TokenKind::Bar
            | TokenKind::Arrow => {
                return self.syntax(&["formula"]);
            }
            TokenKind::Ident(n) if n == "U" || n == "R" => return self.syntax(&["formula"]),
            _ => {}
        }
        let e = self.p.comparison().map_err(LtlError::Syntax)?;
        let mut reserved = None;
        e.walk(&mut |sub| {
            if let crate::lang::ast::ExprKind::Ref(path) = &sub.kind {
                if path.len() == 1 && (UNARY.contains(&path[0].as_str()) || path[0] == "U" || path[0] == "R") {
                    reserved = Some(sub.span);
                }
            }
        });
        if let Some(span) = reserved {
            return Err(LtlError::Atom(Diagnostic::error(
                span,
                "temporal operator used inside an atom",
            )));
        }
        let (c, ty) = self.ts.compile_expr(&e).map_err(LtlError::Atom)?;
        if ty != Ty::Bool {
            return Err(LtlError::Atom(Diagnostic::error(
                e.span,
                format!("atom `{}` has type {ty}, expected boolean", expr_to_string(&e)),
            )));
        }
        if let Some(v) = c.as_const() {
            if matches!(e.kind, crate::lang::ast::ExprKind::Bool(_)) {
                return Ok(Ltl::Const(v.as_bool().unwrap_or(false)));
            }
        }
        Ok(Ltl::atom(expr_to_string(&e), c))
    }
}

fn continues_expression(kind: &TokenKind) -> bool {
    matches!(
        kind,
        TokenKind::Eq
            | TokenKind::Ne
            | TokenKind::Lt
            | TokenKind::Le
            | TokenKind::Gt
            | TokenKind::Ge
            | TokenKind::Plus
            | TokenKind::Minus
    )
}
