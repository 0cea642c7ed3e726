use std::fmt;

use serde::{Deserialize, Serialize};

/// Interned enum symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Sym(SymId),
}

impl Value {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_int(self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ty {
    Bool,
    Int,
    Sym,
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ty::Bool => "boolean",
            Ty::Int => "integer",
            Ty::Sym => "enumeration symbol",
        })
    }
}

/// Concrete value set of a state variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Domain {
    Bool,
    Range(i64, i64),
    Enum(Vec<SymId>),
}

impl Domain {
    pub fn ty(&self) -> Ty {
        match self {
            Domain::Bool => Ty::Bool,
            Domain::Range(..) => Ty::Int,
            Domain::Enum(_) => Ty::Sym,
        }
    }

    pub fn contains(&self, v: Value) -> bool {
        match (self, v) {
            (Domain::Bool, Value::Bool(_)) => true,
            (Domain::Range(lo, hi), Value::Int(x)) => *lo <= x && x <= *hi,
            (Domain::Enum(syms), Value::Sym(s)) => syms.contains(&s),
            _ => false,
        }
    }

    /// Values in canonical order: FALSE before TRUE, ascending integers,
    /// declaration order for enumerations.
    pub fn values(&self) -> Vec<Value> {
        match self {
            Domain::Bool => vec![Value::Bool(false), Value::Bool(true)],
            Domain::Range(lo, hi) => (*lo..=*hi).map(Value::Int).collect(),
            Domain::Enum(syms) => syms.iter().map(|s| Value::Sym(*s)).collect(),
        }
    }

    pub fn size(&self) -> u64 {
        match self {
            Domain::Bool => 2,
            Domain::Range(lo, hi) => (hi - lo + 1) as u64,
            Domain::Enum(syms) => syms.len() as u64,
        }
    }
}
