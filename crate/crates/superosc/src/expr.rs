//! Expression language for bandlimited functions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)*
//! atom   := number | 'x' | '(' expr ')' | name '(' expr (',' expr)* ')'
//! ```
//!
//! `^` binds tighter than `*`/`/`, which bind tighter than `+`/`-`. Names are
//! the builtins `sin`, `cos`, `sinc`, the projections `re`, `im`, and the
//! catalog entries of the active [`CatalogRegistry`]. Catalog arguments must
//! fold to constants; divisors must fold to nonzero constants; exponents are
//! integer literals >= 1. Unary minus is sugar for subtraction from zero, so
//! the printed form of an expression re-parses to a structurally identical
//! tree.

use std::fmt;

use thiserror::Error;

use crate::catalog::{default_registry, CatalogRegistry};

/// Builtin single-argument functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Sin,
    Cos,
    Sinc,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Sinc => "sinc",
        }
    }
}

/// One node of a parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Quotient; the divisor subtree always folds to a nonzero constant.
    Div(Box<Expr>, Box<Expr>),
    /// Integer power, exponent >= 1.
    Pow(Box<Expr>, u32),
    Call(Builtin, Box<Expr>),
    /// Catalog call with constant-folded arguments, e.g. `g(2, 10)`.
    Catalog(String, Vec<f64>),
    Re(Box<Expr>),
    Im(Box<Expr>),
}

/// A parsed expression together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionExpr {
    root: Expr,
    source: String,
}

impl FunctionExpr {
    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Wrap a hand-built tree; the printed form becomes the source.
    pub fn from_root(root: Expr) -> Self {
        let source = root.to_string();
        FunctionExpr { root, source }
    }
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("`{name}` expects {expected} argument(s), got {got} (position {position})")]
    WrongArity {
        name: String,
        expected: usize,
        got: usize,
        position: usize,
    },
    #[error("exponent at position {position} must be an integer >= 1")]
    NonIntegerExponent { position: usize },
    #[error("divisor at position {position} must fold to a constant")]
    DivisionByNonConstant { position: usize },
    #[error("division by zero at position {position}")]
    DivisionByZero { position: usize },
    #[error("argument {index} of `{name}` must fold to a constant (position {position})")]
    NonConstantArgument {
        name: String,
        index: usize,
        position: usize,
    },
}

/// Parse an expression against the default catalog registry.
pub fn parse(text: &str) -> Result<FunctionExpr, ParseError> {
    parse_with(text, default_registry())
}

/// Parse an expression, resolving catalog names against `registry`.
pub fn parse_with(text: &str, registry: &CatalogRegistry) -> Result<FunctionExpr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        registry,
    };
    let root = parser.expr()?;
    parser.expect_end()?;
    Ok(FunctionExpr {
        root,
        source: text.to_string(),
    })
}

/// Fold a subtree to a constant, if it contains no `x` and no calls.
pub fn const_fold(expr: &Expr) -> Option<f64> {
    match expr {
        Expr::Number(v) => Some(*v),
        Expr::Var => None,
        Expr::Add(l, r) => Some(const_fold(l)? + const_fold(r)?),
        Expr::Sub(l, r) => Some(const_fold(l)? - const_fold(r)?),
        Expr::Mul(l, r) => Some(const_fold(l)? * const_fold(r)?),
        Expr::Div(l, r) => Some(const_fold(l)? / const_fold(r)?),
        Expr::Pow(b, n) => Some(const_fold(b)?.powi(*n as i32)),
        Expr::Call(..) | Expr::Catalog(..) | Expr::Re(_) | Expr::Im(_) => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let slice = &text[start..i];
                let value: f64 = slice.parse().map_err(|_| ParseError::Syntax {
                    position: start,
                    message: format!("invalid number `{slice}`"),
                })?;
                out.push((Tok::Number(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError::Syntax {
                    position: i,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    registry: &'a CatalogRegistry,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.tokens.last().map(|(_, p)| p + 1).unwrap_or(0))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                position: self.here(),
                message: format!("expected {what}"),
            })
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                position: self.here(),
                message: "unexpected trailing input".into(),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.term()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term()?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                let rhs = self.unary()?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.peek() == Some(&Tok::Slash) {
                let slash_pos = self.here();
                self.pos += 1;
                let rhs = self.unary()?;
                match const_fold(&rhs) {
                    None => return Err(ParseError::DivisionByNonConstant { position: slash_pos }),
                    Some(v) if v == 0.0 => {
                        return Err(ParseError::DivisionByZero { position: slash_pos })
                    }
                    Some(_) => lhs = Expr::Div(Box::new(lhs), Box::new(rhs)),
                }
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            let inner = self.unary()?;
            Ok(Expr::Sub(Box::new(Expr::Number(0.0)), Box::new(inner)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            let caret_pos = self.here();
            self.pos += 1;
            match self.bump() {
                Some(Tok::Number(v)) if v.fract() == 0.0 && v >= 1.0 && v <= u32::MAX as f64 => {
                    base = Expr::Pow(Box::new(base), v as u32);
                }
                _ => return Err(ParseError::NonIntegerExponent { position: caret_pos }),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let position = self.here();
        match self.bump() {
            Some(Tok::Number(v)) => Ok(Expr::Number(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => self.name(name, position),
            _ => Err(ParseError::Syntax {
                position,
                message: "expected a number, `x`, `(`, or a function call".into(),
            }),
        }
    }

    fn name(&mut self, name: String, position: usize) -> Result<Expr, ParseError> {
        if name == "x" {
            return Ok(Expr::Var);
        }
        self.expect(Tok::LParen, "`(` after function name")?;
        let mut args = Vec::new();
        if self.peek() != Some(&Tok::RParen) {
            loop {
                args.push(self.expr()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;

        let unary_arg = |args: &mut Vec<Expr>| -> Result<Expr, ParseError> {
            if args.len() == 1 {
                Ok(args.pop().unwrap())
            } else {
                Err(ParseError::WrongArity {
                    name: name.clone(),
                    expected: 1,
                    got: args.len(),
                    position,
                })
            }
        };

        match name.as_str() {
            "sin" => Ok(Expr::Call(Builtin::Sin, Box::new(unary_arg(&mut args)?))),
            "cos" => Ok(Expr::Call(Builtin::Cos, Box::new(unary_arg(&mut args)?))),
            "sinc" => Ok(Expr::Call(Builtin::Sinc, Box::new(unary_arg(&mut args)?))),
            "re" => Ok(Expr::Re(Box::new(unary_arg(&mut args)?))),
            "im" => Ok(Expr::Im(Box::new(unary_arg(&mut args)?))),
            _ => {
                let entry = self.registry.lookup(&name).ok_or(ParseError::UnknownIdentifier {
                    name: name.clone(),
                    position,
                })?;
                let expected = entry.param_names().len();
                if args.len() != expected {
                    return Err(ParseError::WrongArity {
                        name,
                        expected,
                        got: args.len(),
                        position,
                    });
                }
                let mut params = Vec::with_capacity(args.len());
                for (i, arg) in args.iter().enumerate() {
                    let v = const_fold(arg).ok_or_else(|| ParseError::NonConstantArgument {
                        name: name.clone(),
                        index: i + 1,
                        position,
                    })?;
                    params.push(v);
                }
                Ok(Expr::Catalog(name, params))
            }
        }
    }
}

// Printing: parenthesization follows the grammar so print -> parse is the
// identity on trees. Precedence: + - (1), * / (2), ^ (3), atoms (4).
impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Number(v) if *v < 0.0 => 1,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            Expr::Number(v) => write!(f, "{v}")?,
            Expr::Var => write!(f, "x")?,
            Expr::Add(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                r.fmt_prec(f, 2)?;
            }
            Expr::Sub(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                r.fmt_prec(f, 2)?;
            }
            Expr::Mul(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, " * ")?;
                r.fmt_prec(f, 3)?;
            }
            Expr::Div(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, " / ")?;
                r.fmt_prec(f, 3)?;
            }
            Expr::Pow(b, n) => {
                b.fmt_prec(f, 4)?;
                write!(f, "^{n}")?;
            }
            Expr::Call(b, arg) => {
                write!(f, "{}(", b.name())?;
                arg.fmt_prec(f, 1)?;
                write!(f, ")")?;
            }
            Expr::Catalog(name, params) => {
                write!(f, "{name}(")?;
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")?;
            }
            Expr::Re(e) => {
                write!(f, "re(")?;
                e.fmt_prec(f, 1)?;
                write!(f, ")")?;
            }
            Expr::Im(e) => {
                write!(f, "im(")?;
                e.fmt_prec(f, 1)?;
                write!(f, ")")?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
