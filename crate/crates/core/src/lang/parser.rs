//! Recursive-descent parser for the model language.

use std::collections::HashSet;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

pub type ParseResult<T> = Result<T, ParseError>;

/// Parse a complete model file.
pub fn parse_model(src: &str) -> ParseResult<ModelAst> {
    let mut p = Parser::new(src)?;
    let mut modules: Vec<ModuleDecl> = Vec::new();
    let mut seen = HashSet::new();
    while !p.at(&TokenKind::Eof) {
        let module = p.module()?;
        if !seen.insert(module.name.name.clone()) {
            return Err(ParseError {
                line: module.name.span.line,
                col: module.name.span.col,
                message: format!("duplicate module name `{}`", module.name.name),
                expected: Vec::new(),
            });
        }
        modules.push(module);
    }
    Ok(ModelAst { modules })
}

/// Parse a standalone expression (the whole input must be consumed).
pub fn parse_expr(src: &str) -> ParseResult<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect(TokenKind::Eof)?;
    Ok(e)
}

pub(crate) struct Parser {
    pub(crate) tokens: Vec<Token>,
    pub(crate) pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> ParseResult<Self> {
        Ok(Parser {
            tokens: tokenize(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    pub(crate) fn peek_at(&self, offset: usize) -> &Token {
        &self.tokens[(self.pos + offset).min(self.tokens.len() - 1)]
    }

    pub(crate) fn at(&self, kind: &TokenKind) -> bool {
        &self.peek().kind == kind
    }

    pub(crate) fn bump(&mut self) -> Token {
        let tok = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    pub(crate) fn eat(&mut self, kind: &TokenKind) -> Option<Token> {
        if self.at(kind) {
            Some(self.bump())
        } else {
            None
        }
    }

    pub(crate) fn error_expected(&self, expected: &[&str]) -> ParseError {
        let tok = self.peek();
        ParseError {
            line: tok.span.line,
            col: tok.span.col,
            message: format!("unexpected {}", tok.kind.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub(crate) fn expect(&mut self, kind: TokenKind) -> ParseResult<Token> {
        if self.at(&kind) {
            Ok(self.bump())
        } else {
            let label = match &kind {
                TokenKind::Eof => "end of input".to_string(),
                k => format!("`{}`", k.lexeme()),
            };
            Err(self.error_expected(&[label.as_str()]))
        }
    }

    pub(crate) fn ident(&mut self) -> ParseResult<Ident> {
        match &self.peek().kind {
            TokenKind::Ident(name) => {
                let name = name.clone();
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => Err(self.error_expected(&["identifier"])),
        }
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn module(&mut self) -> ParseResult<ModuleDecl> {
        let start = self.expect(TokenKind::Module)?.span;
        let name = self.ident()?;
        let mut module = ModuleDecl {
            name,
            params: Vec::new(),
            vars: Vec::new(),
            instances: Vec::new(),
            defines: Vec::new(),
            assigns: Vec::new(),
            span: start,
        };
        if self.eat(&TokenKind::LParen).is_some() {
            if !self.at(&TokenKind::RParen) {
                loop {
                    module.params.push(self.ident()?);
                    if self.eat(&TokenKind::Comma).is_none() {
                        break;
                    }
                }
            }
            self.expect(TokenKind::RParen)?;
        }
        loop {
            match self.peek().kind {
                TokenKind::Var => {
                    self.bump();
                    while matches!(self.peek().kind, TokenKind::Ident(_)) {
                        self.var_decl(&mut module)?;
                    }
                }
                TokenKind::Define => {
                    self.bump();
                    while matches!(self.peek().kind, TokenKind::Ident(_)) {
                        let name = self.ident()?;
                        self.expect(TokenKind::ColonEq)?;
                        let expr = self.expr()?;
                        self.expect(TokenKind::Semi)?;
                        let span = name.span.merge(self.prev_span());
                        module.defines.push(DefineDecl { name, expr, span });
                    }
                }
                TokenKind::Assign => {
                    self.bump();
                    while matches!(self.peek().kind, TokenKind::Init | TokenKind::Next) {
                        module.assigns.push(self.assign()?);
                    }
                }
                TokenKind::Module | TokenKind::Eof => break,
                _ => {
                    return Err(self.error_expected(&[
                        "`VAR`",
                        "`DEFINE`",
                        "`ASSIGN`",
                        "`MODULE`",
                        "end of input",
                    ]))
                }
            }
        }
        module.span = start.merge(self.prev_span());
        Ok(module)
    }

    fn var_decl(&mut self, module: &mut ModuleDecl) -> ParseResult<()> {
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        match self.peek().kind.clone() {
            TokenKind::Boolean => {
                self.bump();
                self.expect(TokenKind::Semi)?;
                let span = name.span.merge(self.prev_span());
                module.vars.push(VarDecl {
                    name,
                    ty: VarType::Boolean,
                    span,
                });
            }
            TokenKind::LBrace => {
                self.bump();
                let mut symbols = vec![self.ident()?];
                while self.eat(&TokenKind::Comma).is_some() {
                    symbols.push(self.ident()?);
                }
                self.expect(TokenKind::RBrace)?;
                self.expect(TokenKind::Semi)?;
                let span = name.span.merge(self.prev_span());
                module.vars.push(VarDecl {
                    name,
                    ty: VarType::Enum(symbols),
                    span,
                });
            }
            TokenKind::Ident(_)
                if matches!(
                    self.peek_at(1).kind,
                    TokenKind::LParen | TokenKind::Semi
                ) =>
            {
                let module_name = self.ident()?;
                let mut args = Vec::new();
                if self.eat(&TokenKind::LParen).is_some() {
                    if !self.at(&TokenKind::RParen) {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(&TokenKind::Comma).is_none() {
                                break;
                            }
                        }
                    }
                    self.expect(TokenKind::RParen)?;
                }
                self.expect(TokenKind::Semi)?;
                let span = name.span.merge(self.prev_span());
                module.instances.push(InstanceDecl {
                    name,
                    module: module_name,
                    args,
                    span,
                });
            }
            _ => {
                let lo = self.additive().map_err(|mut e| {
                    e.expected = vec![
                        "`boolean`".into(),
                        "`{`".into(),
                        "module name".into(),
                        "range lower bound".into(),
                    ];
                    e
                })?;
                self.expect(TokenKind::DotDot)?;
                let hi = self.additive()?;
                self.expect(TokenKind::Semi)?;
                let span = name.span.merge(self.prev_span());
                module.vars.push(VarDecl {
                    name,
                    ty: VarType::Range(lo, hi),
                    span,
                });
            }
        }
        Ok(())
    }

    fn assign(&mut self) -> ParseResult<AssignRule> {
        let tok = self.bump();
        let kind = match tok.kind {
            TokenKind::Init => AssignKind::Init,
            _ => AssignKind::Next,
        };
        self.expect(TokenKind::LParen)?;
        let target = self.ident()?;
        self.expect(TokenKind::RParen)?;
        self.expect(TokenKind::ColonEq)?;
        let expr = self.expr()?;
        self.expect(TokenKind::Semi)?;
        Ok(AssignRule {
            kind,
            target,
            expr,
            span: tok.span.merge(self.prev_span()),
        })
    }

    pub(crate) fn expr(&mut self) -> ParseResult<Expr> {
        let lhs = self.or_expr()?;
        if self.eat(&TokenKind::Arrow).is_some() {
            let rhs = self.expr()?;
            let span = lhs.span.merge(rhs.span);
            return Ok(Expr {
                kind: ExprKind::Binary(BinOp::Implies, Box::new(lhs), Box::new(rhs)),
                span,
            });
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.and_expr()?;
        while self.eat(&TokenKind::Bar).is_some() {
            let rhs = self.and_expr()?;
            lhs = join(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.comparison()?;
        while self.eat(&TokenKind::Amp).is_some() {
            let rhs = self.comparison()?;
            lhs = join(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    /// Comparison level: `a + 1 = b`. Comparisons do not chain.
    pub(crate) fn comparison(&mut self) -> ParseResult<Expr> {
        let lhs = self.additive()?;
        let op = match self.peek().kind {
            TokenKind::Eq => BinOp::Eq,
            TokenKind::Ne => BinOp::Ne,
            TokenKind::Lt => BinOp::Lt,
            TokenKind::Le => BinOp::Le,
            TokenKind::Gt => BinOp::Gt,
            TokenKind::Ge => BinOp::Ge,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.additive()?;
        Ok(join(op, lhs, rhs))
    }

    fn additive(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = join(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> ParseResult<Expr> {
        let op = match self.peek().kind {
            TokenKind::Bang => UnOp::Not,
            TokenKind::Minus => UnOp::Neg,
            _ => return self.primary(),
        };
        let start = self.bump().span;
        let operand = self.unary()?;
        let span = start.merge(operand.span);
        Ok(Expr {
            kind: ExprKind::Unary(op, Box::new(operand)),
            span,
        })
    }

    fn primary(&mut self) -> ParseResult<Expr> {
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::True | TokenKind::False => {
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Bool(tok.kind == TokenKind::True),
                    span: tok.span,
                })
            }
            TokenKind::Int(v) => {
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Int(v),
                    span: tok.span,
                })
            }
            TokenKind::Ident(_) => {
                let first = self.ident()?;
                let mut span = first.span;
                let mut path = vec![first.name];
                while self.at(&TokenKind::Dot) {
                    self.bump();
                    let seg = self.ident()?;
                    span = span.merge(seg.span);
                    path.push(seg.name);
                }
                Ok(Expr {
                    kind: ExprKind::Ref(path),
                    span,
                })
            }
            TokenKind::LParen => {
                self.bump();
                let mut inner = self.expr()?;
                let close = self.expect(TokenKind::RParen)?;
                inner.span = tok.span.merge(close.span);
                Ok(inner)
            }
            TokenKind::Case => {
                self.bump();
                let mut arms = Vec::new();
                while !self.at(&TokenKind::Esac) {
                    let guard = self.expr().map_err(|mut e| {
                        if arms.is_empty() {
                            e.expected = vec!["case guard".into()];
                        } else {
                            e.expected = vec!["case guard".into(), "`esac`".into()];
                        }
                        e
                    })?;
                    self.expect(TokenKind::Colon)?;
                    let value = self.expr()?;
                    self.expect(TokenKind::Semi)?;
                    let span = guard.span.merge(self.prev_span());
                    arms.push(CaseArm { guard, value, span });
                }
                if arms.is_empty() {
                    return Err(self.error_expected(&["case guard"]));
                }
                let end = self.expect(TokenKind::Esac)?.span;
                Ok(Expr {
                    kind: ExprKind::Case(arms),
                    span: tok.span.merge(end),
                })
            }
            TokenKind::LBrace => {
                self.bump();
                let mut items = vec![self.expr()?];
                while self.eat(&TokenKind::Comma).is_some() {
                    items.push(self.expr()?);
                }
                let end = self.expect(TokenKind::RBrace)?.span;
                Ok(Expr {
                    kind: ExprKind::Set(items),
                    span: tok.span.merge(end),
                })
            }
            _ => Err(self.error_expected(&[
                "`TRUE`",
                "`FALSE`",
                "integer",
                "identifier",
                "`(`",
                "`case`",
                "`{`",
                "`!`",
                "`-`",
            ])),
        }
    }
}

fn join(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span.merge(rhs.span);
    Expr {
        kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
        span,
    }
}
