//! Frontend for the SMV-style modeling language: tokens, syntax tree,
//! parser, canonical printer and static validation.

pub mod ast;
pub mod lexer;
mod parser;
pub mod printer;
mod validate;

use std::fmt;

pub use ast::{ModelAst, Span};
pub use parser::{parse_expr, parse_model, ParseResult};
pub(crate) use parser::Parser;
pub use printer::{expr_to_string, pretty_print};
pub use validate::validate_model;

/// Syntax error with 1-based position and the set of tokens that would
/// have been accepted.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        match self.expected.len() {
            0 => Ok(()),
            1 => write!(f, "; expected {}", self.expected[0]),
            _ => write!(f, "; expected one of {}", self.expected.join(", ")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            span,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{}: {sev}: {}", self.span, self.message)
    }
}
