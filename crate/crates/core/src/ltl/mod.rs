//! The specification dialect: linear temporal logic over model atoms with
//! bounded-window and past operators.
//!
//! Operator precedence, tightest first:
//!
//! | level | operators                                   | associativity |
//! |-------|---------------------------------------------|---------------|
//! | 1     | `!` `X` `F` `G` `F[a,b]` `G[a,b]` `O` `Y` `H` | prefix        |
//! | 2     | `U` `R`                                     | right         |
//! | 3     | `&`                                         | left          |
//! | 4     | `\|`                                        | left          |
//! | 5     | `->`                                        | right         |
//!
//! An atom is a model comparison expression such as `Mode = Normal` or
//! `e1.Timer + 1 < 3`; a bare boolean variable or DEFINE is an atom too.
//! The single capital letters above are reserved inside formulas.

mod bounded;
mod parser;
mod past;
mod prefix;

use std::fmt;
use std::sync::Arc;

use crate::semantics::CExpr;

pub use bounded::expand_bounded;
pub use parser::parse_ltl;
pub use past::{eliminate_past, PastError};
pub use prefix::{holds_on_prefix, verdicts, PrefixVerdict};

/// A boolean state expression inside a formula.
#[derive(Debug, Clone)]
pub struct Atom {
    /// Source text, used for printing.
    pub text: String,
    pub expr: CExpr,
}

/// Atoms compare by compiled meaning, not spelling.
impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

impl Eq for Atom {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ltl {
    Const(bool),
    Atom(Arc<Atom>),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Finally(Box<Ltl>),
    Globally(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
    /// `F[a,b]`: some position in `[i+a, i+b]`.
    BoundedF(u32, u32, Box<Ltl>),
    /// `G[a,b]`: every position in `[i+a, i+b]`.
    BoundedG(u32, u32, Box<Ltl>),
    Once(Box<Ltl>),
    Yesterday(Box<Ltl>),
    Historically(Box<Ltl>),
}

impl Ltl {
    pub fn atom(text: impl Into<String>, expr: CExpr) -> Ltl {
        Ltl::Atom(Arc::new(Atom {
            text: text.into(),
            expr,
        }))
    }

    pub fn not(a: Ltl) -> Ltl {
        Ltl::Not(Box::new(a))
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn next(a: Ltl) -> Ltl {
        Ltl::Next(Box::new(a))
    }

    pub fn children(&self) -> Vec<&Ltl> {
        match self {
            Ltl::Const(_) | Ltl::Atom(_) => vec![],
            Ltl::Not(a)
            | Ltl::Next(a)
            | Ltl::Finally(a)
            | Ltl::Globally(a)
            | Ltl::BoundedF(_, _, a)
            | Ltl::BoundedG(_, _, a)
            | Ltl::Once(a)
            | Ltl::Yesterday(a)
            | Ltl::Historically(a) => vec![a],
            Ltl::And(a, b)
            | Ltl::Or(a, b)
            | Ltl::Implies(a, b)
            | Ltl::Until(a, b)
            | Ltl::Release(a, b) => vec![a, b],
        }
    }

    pub fn is_past(&self) -> bool {
        matches!(self, Ltl::Once(_) | Ltl::Yesterday(_) | Ltl::Historically(_))
    }

    pub fn is_future_temporal(&self) -> bool {
        matches!(
            self,
            Ltl::Next(_)
                | Ltl::Finally(_)
                | Ltl::Globally(_)
                | Ltl::Until(..)
                | Ltl::Release(..)
                | Ltl::BoundedF(..)
                | Ltl::BoundedG(..)
        )
    }

    pub fn any(&self, pred: &dyn Fn(&Ltl) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn has_past(&self) -> bool {
        self.any(&Ltl::is_past)
    }

    /// Whether some unbounded F, G, U or R can only be established by an
    /// infinite continuation, taking polarity into account. On finite
    /// prefixes such a formula never reports Holds for that obligation and
    /// a missing counterexample is therefore inconclusive.
    pub fn has_unbounded_liveness(&self) -> bool {
        fn walk(f: &Ltl, positive: bool) -> bool {
            match f {
                Ltl::Const(_) | Ltl::Atom(_) => false,
                Ltl::Not(a) => walk(a, !positive),
                Ltl::Implies(a, b) => walk(a, !positive) || walk(b, positive),
                Ltl::And(a, b) | Ltl::Or(a, b) => walk(a, positive) || walk(b, positive),
                Ltl::Finally(a) => positive || walk(a, positive),
                Ltl::Until(a, b) => positive || walk(a, positive) || walk(b, positive),
                // G and R are violated by finite prefixes; positively they
                // never hold on a prefix but that is the expected reading.
                Ltl::Globally(a) => !positive || walk(a, positive),
                Ltl::Release(a, b) => !positive || walk(a, positive) || walk(b, positive),
                Ltl::Next(a)
                | Ltl::BoundedF(_, _, a)
                | Ltl::BoundedG(_, _, a)
                | Ltl::Once(a)
                | Ltl::Yesterday(a)
                | Ltl::Historically(a) => walk(a, positive),
            }
        }
        walk(self, true)
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Ltl::size).sum::<usize>()
    }

    fn precedence(&self) -> u8 {
        match self {
            Ltl::Implies(..) => 1,
            Ltl::Or(..) => 2,
            Ltl::And(..) => 3,
            Ltl::Until(..) | Ltl::Release(..) => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, c: &Ltl, min: u8| {
            if c.precedence() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        let unary = |f: &mut fmt::Formatter<'_>, op: &str, a: &Ltl| {
            write!(f, "{op} ")?;
            child(f, a, 5)
        };
        match self {
            Ltl::Const(true) => write!(f, "TRUE"),
            Ltl::Const(false) => write!(f, "FALSE"),
            Ltl::Atom(a) => {
                if a.text.contains(' ') {
                    write!(f, "({})", a.text)
                } else {
                    write!(f, "{}", a.text)
                }
            }
            Ltl::Not(a) => {
                write!(f, "!")?;
                child(f, a, 5)
            }
            Ltl::And(a, b) => {
                child(f, a, 3)?;
                write!(f, " & ")?;
                child(f, b, 4)
            }
            Ltl::Or(a, b) => {
                child(f, a, 2)?;
                write!(f, " | ")?;
                child(f, b, 3)
            }
            Ltl::Implies(a, b) => {
                child(f, a, 2)?;
                write!(f, " -> ")?;
                child(f, b, 1)
            }
            Ltl::Until(a, b) | Ltl::Release(a, b) => {
                child(f, a, 5)?;
                write!(f, " {} ", if matches!(self, Ltl::Until(..)) { "U" } else { "R" })?;
                child(f, b, 4)
            }
            Ltl::Next(a) => unary(f, "X", a),
            Ltl::Finally(a) => unary(f, "F", a),
            Ltl::Globally(a) => unary(f, "G", a),
            Ltl::BoundedF(lo, hi, a) => unary(f, &format!("F[{lo},{hi}]"), a),
            Ltl::BoundedG(lo, hi, a) => unary(f, &format!("G[{lo},{hi}]"), a),
            Ltl::Once(a) => unary(f, "O", a),
            Ltl::Yesterday(a) => unary(f, "Y", a),
            Ltl::Historically(a) => unary(f, "H", a),
        }
    }
}
