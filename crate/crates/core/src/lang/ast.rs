//! Syntax tree of the modeling language.
//!
//! Every node keeps the [`Span`] it was parsed from. Spans compare equal
//! unconditionally so that `==` on trees is structural equality; use the
//! span fields directly when positions matter.

use std::fmt;

#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    /// Byte offset of the first character.
    pub start: usize,
    /// Byte offset one past the last character.
    pub end: usize,
    /// 1-based line.
    pub line: u32,
    /// 1-based column.
    pub col: u32,
}

impl Span {
    pub fn merge(self, other: Span) -> Span {
        let (first, last) = if self.start <= other.start {
            (self, other)
        } else {
            (other, self)
        };
        Span {
            start: first.start,
            end: last.end.max(first.end),
            line: first.line,
            col: first.col,
        }
    }
}

impl PartialEq for Span {
    fn eq(&self, _other: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident {
            name: name.into(),
            span: Span::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelAst {
    pub modules: Vec<ModuleDecl>,
}

impl ModelAst {
    /// The module named `main`, if present (the first one when duplicated).
    pub fn main(&self) -> Option<&ModuleDecl> {
        self.module("main")
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDecl> {
        self.modules.iter().find(|m| m.name.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub vars: Vec<VarDecl>,
    pub instances: Vec<InstanceDecl>,
    pub defines: Vec<DefineDecl>,
    pub assigns: Vec<AssignRule>,
    pub span: Span,
}

impl ModuleDecl {
    pub fn new(name: &str) -> Self {
        ModuleDecl {
            name: Ident::new(name),
            params: Vec::new(),
            vars: Vec::new(),
            instances: Vec::new(),
            defines: Vec::new(),
            assigns: Vec::new(),
            span: Span::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: Ident,
    pub ty: VarType,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarType {
    Boolean,
    Enum(Vec<Ident>),
    /// Inclusive integer range; bounds are constant expressions resolved at
    /// elaboration.
    Range(Expr, Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDecl {
    pub name: Ident,
    pub module: Ident,
    pub args: Vec<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefineDecl {
    pub name: Ident,
    pub expr: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssignKind {
    Init,
    Next,
}

impl fmt::Display for AssignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssignKind::Init => "init",
            AssignKind::Next => "next",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignRule {
    pub kind: AssignKind,
    pub target: Ident,
    pub expr: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Bool(bool),
    Int(i64),
    /// Possibly dotted reference: `x`, `Global.T1_MAX`, `bus.Lost_1`.
    Ref(Vec<String>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Case(Vec<CaseArm>),
    /// Nondeterministic choice `{e1, ..., en}`.
    Set(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseArm {
    pub guard: Expr,
    pub value: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Implies,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Implies => "->",
            BinOp::Or => "|",
            BinOp::And => "&",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Implies => 1,
            BinOp::Or => 2,
            BinOp::And => 3,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
        }
    }

    pub fn is_comparison(self) -> bool {
        self.precedence() == 4
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr {
            kind,
            span: Span::default(),
        }
    }

    pub fn boolean(b: bool) -> Self {
        Expr::new(ExprKind::Bool(b))
    }

    pub fn int(v: i64) -> Self {
        Expr::new(ExprKind::Int(v))
    }

    pub fn var(name: &str) -> Self {
        Expr::new(ExprKind::Ref(name.split('.').map(str::to_string).collect()))
    }

    pub fn not(e: Expr) -> Self {
        Expr::new(ExprKind::Unary(UnOp::Not, Box::new(e)))
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Self {
        Expr::new(ExprKind::Binary(op, Box::new(l), Box::new(r)))
    }

    pub fn is_true_literal(&self) -> bool {
        matches!(self.kind, ExprKind::Bool(true))
    }

    /// Visit every sub-expression, parents before children.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        match &self.kind {
            ExprKind::Bool(_) | ExprKind::Int(_) | ExprKind::Ref(_) => {}
            ExprKind::Unary(_, e) => e.walk(f),
            ExprKind::Binary(_, l, r) => {
                l.walk(f);
                r.walk(f);
            }
            ExprKind::Case(arms) => {
                for arm in arms {
                    arm.guard.walk(f);
                    arm.value.walk(f);
                }
            }
            ExprKind::Set(items) => items.iter().for_each(|e| e.walk(f)),
        }
    }
}
