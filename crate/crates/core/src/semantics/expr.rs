//! Compiled expressions over the flat variable vector of a
//! [`TransitionSystem`](super::TransitionSystem).

use crate::lang::ast::{BinOp, UnOp};

use super::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CExpr {
    Const(Value),
    Var(usize),
    Unary(UnOp, Box<CExpr>),
    Bin(BinOp, Box<CExpr>, Box<CExpr>),
    /// Guarded arms; the first arm whose guard holds is selected.
    Case(Vec<(CExpr, CExpr)>),
    /// Nondeterministic choice; only legal in rule value positions.
    Set(Vec<CExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("integer overflow in `{0}`")]
    Overflow(&'static str),
    #[error("no case arm applies")]
    NoArm,
    #[error("set literal used as a single value")]
    SetInValuePosition,
    #[error("operand type mismatch")]
    Type,
}

impl CExpr {
    pub fn tt() -> Self {
        CExpr::Const(Value::Bool(true))
    }

    pub fn ff() -> Self {
        CExpr::Const(Value::Bool(false))
    }

    pub fn and(a: CExpr, b: CExpr) -> Self {
        CExpr::Bin(BinOp::And, Box::new(a), Box::new(b))
    }

    pub fn or(a: CExpr, b: CExpr) -> Self {
        CExpr::Bin(BinOp::Or, Box::new(a), Box::new(b))
    }

    pub fn not(a: CExpr) -> Self {
        CExpr::Unary(UnOp::Not, Box::new(a))
    }

    pub fn as_const(&self) -> Option<Value> {
        match self {
            CExpr::Const(v) => Some(*v),
            _ => None,
        }
    }

    pub fn eval(&self, state: &[Value]) -> Result<Value, EvalError> {
        match self {
            CExpr::Const(v) => Ok(*v),
            CExpr::Var(i) => Ok(state[*i]),
            CExpr::Unary(op, e) => {
                let v = e.eval(state)?;
                match (op, v) {
                    (UnOp::Not, Value::Bool(b)) => Ok(Value::Bool(!b)),
                    (UnOp::Neg, Value::Int(x)) => x
                        .checked_neg()
                        .map(Value::Int)
                        .ok_or(EvalError::Overflow("-")),
                    _ => Err(EvalError::Type),
                }
            }
            CExpr::Bin(op, l, r) => {
                // short-circuit boolean connectives
                match op {
                    BinOp::And => {
                        return match l.eval(state)? {
                            Value::Bool(false) => Ok(Value::Bool(false)),
                            Value::Bool(true) => r.eval(state),
                            _ => Err(EvalError::Type),
                        }
                    }
                    BinOp::Or => {
                        return match l.eval(state)? {
                            Value::Bool(true) => Ok(Value::Bool(true)),
                            Value::Bool(false) => r.eval(state),
                            _ => Err(EvalError::Type),
                        }
                    }
                    BinOp::Implies => {
                        return match l.eval(state)? {
                            Value::Bool(false) => Ok(Value::Bool(true)),
                            Value::Bool(true) => r.eval(state),
                            _ => Err(EvalError::Type),
                        }
                    }
                    _ => {}
                }
                let a = l.eval(state)?;
                let b = r.eval(state)?;
                apply_binary(*op, a, b)
            }
            CExpr::Case(arms) => {
                for (guard, value) in arms {
                    if guard.eval(state)? == Value::Bool(true) {
                        return value.eval(state);
                    }
                }
                Err(EvalError::NoArm)
            }
            CExpr::Set(_) => Err(EvalError::SetInValuePosition),
        }
    }

    pub fn eval_bool(&self, state: &[Value]) -> Result<bool, EvalError> {
        self.eval(state)?.as_bool().ok_or(EvalError::Type)
    }

    /// Evaluate a rule right-hand side, expanding set literals (also inside
    /// selected case arms) into the listed alternatives, first occurrence
    /// order, duplicates removed.
    pub fn eval_choices(&self, state: &[Value], out: &mut Vec<Value>) -> Result<(), EvalError> {
        match self {
            CExpr::Set(items) => {
                for item in items {
                    let mut sub = Vec::new();
                    item.eval_choices(state, &mut sub)?;
                    for v in sub {
                        if !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
                Ok(())
            }
            CExpr::Case(arms) => {
                for (guard, value) in arms {
                    if guard.eval(state)? == Value::Bool(true) {
                        return value.eval_choices(state, out);
                    }
                }
                Err(EvalError::NoArm)
            }
            _ => {
                let v = self.eval(state)?;
                if !out.contains(&v) {
                    out.push(v);
                }
                Ok(())
            }
        }
    }

    pub fn contains_set(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if matches!(e, CExpr::Set(_)) {
                found = true;
            }
        });
        found
    }

    pub fn visit(&self, f: &mut dyn FnMut(&CExpr)) {
        f(self);
        match self {
            CExpr::Const(_) | CExpr::Var(_) => {}
            CExpr::Unary(_, e) => e.visit(f),
            CExpr::Bin(_, l, r) => {
                l.visit(f);
                r.visit(f);
            }
            CExpr::Case(arms) => {
                for (g, v) in arms {
                    g.visit(f);
                    v.visit(f);
                }
            }
            CExpr::Set(items) => items.iter().for_each(|e| e.visit(f)),
        }
    }

    /// Indices of variables read by this expression.
    pub fn support(&self) -> Vec<usize> {
        let mut vars = Vec::new();
        self.visit(&mut |e| {
            if let CExpr::Var(i) = e {
                if !vars.contains(i) {
                    vars.push(*i);
                }
            }
        });
        vars.sort_unstable();
        vars
    }

    /// Replace variable references through `map`.
    pub fn remap(&self, map: &dyn Fn(usize) -> CExpr) -> CExpr {
        match self {
            CExpr::Const(v) => CExpr::Const(*v),
            CExpr::Var(i) => map(*i),
            CExpr::Unary(op, e) => CExpr::Unary(*op, Box::new(e.remap(map))),
            CExpr::Bin(op, l, r) => CExpr::Bin(*op, Box::new(l.remap(map)), Box::new(r.remap(map))),
            CExpr::Case(arms) => CExpr::Case(
                arms.iter()
                    .map(|(g, v)| (g.remap(map), v.remap(map)))
                    .collect(),
            ),
            CExpr::Set(items) => CExpr::Set(items.iter().map(|e| e.remap(map)).collect()),
        }
    }

    /// Build a node, folding it to a constant when all operands are constant.
    pub fn fold(self) -> CExpr {
        match &self {
            CExpr::Unary(_, e) if e.as_const().is_some() => match self.eval(&[]) {
                Ok(v) => CExpr::Const(v),
                Err(_) => self,
            },
            CExpr::Bin(op, l, r) => {
                let (lc, rc) = (l.as_const(), r.as_const());
                if lc.is_some() && rc.is_some() {
                    return match self.eval(&[]) {
                        Ok(v) => CExpr::Const(v),
                        Err(_) => self,
                    };
                }
                match (op, lc) {
                    (BinOp::And, Some(Value::Bool(false))) => CExpr::ff(),
                    (BinOp::And, Some(Value::Bool(true))) => (**r).clone(),
                    (BinOp::Or, Some(Value::Bool(true))) => CExpr::tt(),
                    (BinOp::Or, Some(Value::Bool(false))) => (**r).clone(),
                    (BinOp::Implies, Some(Value::Bool(false))) => CExpr::tt(),
                    (BinOp::Implies, Some(Value::Bool(true))) => (**r).clone(),
                    _ => self,
                }
            }
            CExpr::Case(arms) => {
                let mut kept = Vec::new();
                for (g, v) in arms {
                    match g.as_const() {
                        Some(Value::Bool(false)) => continue,
                        Some(Value::Bool(true)) => {
                            if kept.is_empty() {
                                return v.clone();
                            }
                            kept.push((g.clone(), v.clone()));
                            break;
                        }
                        _ => kept.push((g.clone(), v.clone())),
                    }
                }
                CExpr::Case(kept)
            }
            _ => self,
        }
    }
}

pub fn apply_binary(op: BinOp, a: Value, b: Value) -> Result<Value, EvalError> {
    use Value::*;
    Ok(match (op, a, b) {
        (BinOp::And, Bool(x), Bool(y)) => Bool(x && y),
        (BinOp::Or, Bool(x), Bool(y)) => Bool(x || y),
        (BinOp::Implies, Bool(x), Bool(y)) => Bool(!x || y),
        (BinOp::Eq, x, y) => Bool(x == y),
        (BinOp::Ne, x, y) => Bool(x != y),
        (BinOp::Lt, Int(x), Int(y)) => Bool(x < y),
        (BinOp::Le, Int(x), Int(y)) => Bool(x <= y),
        (BinOp::Gt, Int(x), Int(y)) => Bool(x > y),
        (BinOp::Ge, Int(x), Int(y)) => Bool(x >= y),
        (BinOp::Add, Int(x), Int(y)) => Int(x.checked_add(y).ok_or(EvalError::Overflow("+"))?),
        (BinOp::Sub, Int(x), Int(y)) => Int(x.checked_sub(y).ok_or(EvalError::Overflow("-"))?),
        _ => return Err(EvalError::Type),
    })
}
