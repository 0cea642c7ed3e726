//! Tokenizer shared by the model language and the specification dialect.

use std::fmt;

use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    // keywords
    Module,
    Var,
    Define,
    Assign,
    Init,
    Next,
    Case,
    Esac,
    True,
    False,
    Boolean,
    // punctuation
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    ColonEq,
    DotDot,
    Dot,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Amp,
    Bar,
    Bang,
    Arrow,
    Plus,
    Minus,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Int(v) => format!("integer `{v}`"),
            TokenKind::Eof => "end of input".to_string(),
            other => format!("`{}`", other.lexeme()),
        }
    }

    pub fn lexeme(&self) -> &'static str {
        match self {
            TokenKind::Ident(_) => "identifier",
            TokenKind::Int(_) => "integer",
            TokenKind::Module => "MODULE",
            TokenKind::Var => "VAR",
            TokenKind::Define => "DEFINE",
            TokenKind::Assign => "ASSIGN",
            TokenKind::Init => "init",
            TokenKind::Next => "next",
            TokenKind::Case => "case",
            TokenKind::Esac => "esac",
            TokenKind::True => "TRUE",
            TokenKind::False => "FALSE",
            TokenKind::Boolean => "boolean",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Comma => ",",
            TokenKind::Semi => ";",
            TokenKind::Colon => ":",
            TokenKind::ColonEq => ":=",
            TokenKind::DotDot => "..",
            TokenKind::Dot => ".",
            TokenKind::Eq => "=",
            TokenKind::Ne => "!=",
            TokenKind::Lt => "<",
            TokenKind::Le => "<=",
            TokenKind::Gt => ">",
            TokenKind::Ge => ">=",
            TokenKind::Amp => "&",
            TokenKind::Bar => "|",
            TokenKind::Bang => "!",
            TokenKind::Arrow => "->",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Eof => "<eof>",
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

/// Words that can never be used as identifiers.
pub const KEYWORDS: &[&str] = &[
    "MODULE", "VAR", "DEFINE", "ASSIGN", "init", "next", "case", "esac", "TRUE", "FALSE",
    "boolean",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "MODULE" => TokenKind::Module,
        "VAR" => TokenKind::Var,
        "DEFINE" => TokenKind::Define,
        "ASSIGN" => TokenKind::Assign,
        "init" => TokenKind::Init,
        "next" => TokenKind::Next,
        "case" => TokenKind::Case,
        "esac" => TokenKind::Esac,
        "TRUE" => TokenKind::True,
        "FALSE" => TokenKind::False,
        "boolean" => TokenKind::Boolean,
        _ => return None,
    })
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0usize;
    let mut line = 1u32;
    let mut line_start = 0usize;

    while pos < bytes.len() {
        let c = bytes[pos];
        if c == b'\n' {
            pos += 1;
            line += 1;
            line_start = pos;
            continue;
        }
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        // `--` comment to end of line
        if c == b'-' && bytes.get(pos + 1) == Some(&b'-') {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        let col = (start - line_start) as u32 + 1;
        let span_to = |end: usize| Span {
            start,
            end,
            line,
            col,
        };

        if c.is_ascii_alphabetic() || c == b'_' {
            while pos < bytes.len()
                && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_' || bytes[pos] == b'$')
            {
                pos += 1;
            }
            let word = &src[start..pos];
            let kind = keyword(word).unwrap_or_else(|| TokenKind::Ident(word.to_string()));
            tokens.push(Token {
                kind,
                span: span_to(pos),
            });
            continue;
        }
        if c.is_ascii_digit() {
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let text = &src[start..pos];
            let value: i64 = text.parse().map_err(|_| ParseError {
                line,
                col,
                message: format!("integer literal `{text}` out of range"),
                expected: Vec::new(),
            })?;
            tokens.push(Token {
                kind: TokenKind::Int(value),
                span: span_to(pos),
            });
            continue;
        }

        let two = bytes.get(pos + 1).copied();
        let (kind, len) = match (c, two) {
            (b':', Some(b'=')) => (TokenKind::ColonEq, 2),
            (b'.', Some(b'.')) => (TokenKind::DotDot, 2),
            (b'!', Some(b'=')) => (TokenKind::Ne, 2),
            (b'<', Some(b'=')) => (TokenKind::Le, 2),
            (b'>', Some(b'=')) => (TokenKind::Ge, 2),
            (b'-', Some(b'>')) => (TokenKind::Arrow, 2),
            (b'(', _) => (TokenKind::LParen, 1),
            (b')', _) => (TokenKind::RParen, 1),
            (b'{', _) => (TokenKind::LBrace, 1),
            (b'}', _) => (TokenKind::RBrace, 1),
            (b'[', _) => (TokenKind::LBracket, 1),
            (b']', _) => (TokenKind::RBracket, 1),
            (b',', _) => (TokenKind::Comma, 1),
            (b';', _) => (TokenKind::Semi, 1),
            (b':', _) => (TokenKind::Colon, 1),
            (b'.', _) => (TokenKind::Dot, 1),
            (b'=', _) => (TokenKind::Eq, 1),
            (b'<', _) => (TokenKind::Lt, 1),
            (b'>', _) => (TokenKind::Gt, 1),
            (b'&', _) => (TokenKind::Amp, 1),
            (b'|', _) => (TokenKind::Bar, 1),
            (b'!', _) => (TokenKind::Bang, 1),
            (b'+', _) => (TokenKind::Plus, 1),
            (b'-', _) => (TokenKind::Minus, 1),
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character `{ch}`"),
                    expected: Vec::new(),
                });
            }
        };
        pos += len;
        tokens.push(Token {
            kind,
            span: span_to(pos),
        });
    }

    let col = (pos - line_start) as u32 + 1;
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: Span {
            start: pos,
            end: pos,
            line,
            col,
        },
    });
    Ok(tokens)
}
