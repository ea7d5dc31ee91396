//! Literal syntax shared by scalars, forms and vector fields.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' atom)*
//! atom   := INT | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers resolve to `t`, `pi`, chart coordinates, basis covectors
//! (`dx` on coordinate charts, `th_E` on Lie charts) and basis vectors
//! (`e_x`, `e_E`). `^` is the wedge between forms and an integer power
//! between scalars. Periodic coordinates only make sense as phases inside
//! `sin`/`cos`, e.g. `sin(2*x - y)`.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, One, ToPrimitive, Zero};
use thiserror::Error;

use crate::forms::{Chart, DifferentialForm, VectorField};
use crate::scalar::{Rational, Scalar, Var, VariableTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(column: usize, message: impl Into<String>) -> Self {
        ParseError { line: 1, column, message: message.into() }
    }

    /// Shift a position reported relative to a substring.
    pub fn relocate(mut self, line: usize, column_offset: usize) -> Self {
        self.line = line;
        self.column += column_offset;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(ParseError::at(col, format!("unexpected character `{c}`"))),
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Value {
    Scalar(Scalar),
    /// Integer-linear combination of periodic coordinates; rationals while
    /// being built, checked integral at `sin`/`cos`.
    Phase(Vec<Rational>),
    Form(DifferentialForm),
    Vector(VectorField),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Phase(_) => "phase",
            Value::Form(_) => "form",
            Value::Vector(_) => "vector",
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    table: &'a Arc<VariableTable>,
    chart: Option<&'a Arc<Chart>>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::at(self.col(), msg))
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                let col = self.col();
                let v = self.term()?;
                self.neg(v, col)?
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            let col = self.col();
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.add(acc, rhs, col)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    let rhs = self.neg(rhs, col)?;
                    acc = self.add(acc, rhs, col)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let col = self.col();
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.mul(acc, rhs, col)?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.div(acc, rhs, col)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            let col = self.col();
            self.bump();
            let v = self.unary()?;
            return self.neg(v, col);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.atom()?;
        while let Some(Tok::Caret) = self.peek() {
            let col = self.col();
            self.bump();
            let rhs = self.atom()?;
            acc = self.caret(acc, rhs, col)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Value::Scalar(Scalar::constant(self.table, Rational::from_integer(n)))),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(ParseError::at(self.col(), "expected `)`")),
                }
            }
            Some(Tok::Ident(name)) => {
                if let Some(Tok::LParen) = self.peek() {
                    self.bump();
                    let arg = self.expr()?;
                    if self.bump() != Some(Tok::RParen) {
                        return Err(ParseError::at(self.col(), "expected `)`"));
                    }
                    return self.call(&name, arg, col);
                }
                self.ident(&name, col)
            }
            Some(t) => Err(ParseError::at(col, format!("unexpected token {t:?}"))),
            None => Err(ParseError::at(col, "unexpected end of input")),
        }
    }

    fn ident(&self, name: &str, col: usize) -> Result<Value, ParseError> {
        let fail = |m: String| Err(ParseError::at(col, m));
        if name == "pi" {
            return Ok(Value::Scalar(Scalar::pi(self.table)));
        }
        if let Some(var) = self.table.lookup(name) {
            return match var {
                Var::Coord(i) if self.table.is_periodic(i) => {
                    let mut phase = vec![Rational::zero(); self.table.coord_count()];
                    phase[i] = Rational::one();
                    Ok(Value::Phase(phase))
                }
                v => Ok(Value::Scalar(Scalar::var(self.table, v).map_err(|e| ParseError::at(col, e.to_string()))?)),
            };
        }
        if let Some(chart) = self.chart {
            let lie = chart.is_lie();
            let covector = if lie { name.strip_prefix("th_") } else { name.strip_prefix('d') };
            if let Some(i) = covector.and_then(|n| chart.index_of(n)) {
                return Ok(Value::Form(DifferentialForm::basis(chart, i).expect("index in range")));
            }
            if let Some(i) = name.strip_prefix("e_").and_then(|n| chart.index_of(n)) {
                return Ok(Value::Vector(VectorField::basis(chart, i).expect("index in range")));
            }
        }
        fail(format!("unknown identifier `{name}`"))
    }

    fn call(&self, name: &str, arg: Value, col: usize) -> Result<Value, ParseError> {
        let e = |m: String| ParseError::at(col, m);
        match name {
            "sin" | "cos" => {
                let freq: Vec<i32> = match arg {
                    Value::Phase(p) => p
                        .iter()
                        .map(|r| {
                            if !r.is_integer() {
                                return Err(e(format!("{name} needs integer frequencies")));
                            }
                            r.to_integer().to_i32().ok_or_else(|| e("frequency too large".into()))
                        })
                        .collect::<Result<_, _>>()?,
                    Value::Scalar(s) if s.is_zero() => vec![0; self.table.coord_count()],
                    other => {
                        return Err(e(format!(
                            "{name} expects a phase in periodic coordinates, got a {}",
                            other.kind()
                        )))
                    }
                };
                let s = if name == "sin" { Scalar::sin(self.table, &freq) } else { Scalar::cos(self.table, &freq) };
                Ok(Value::Scalar(s.map_err(|x| e(x.to_string()))?))
            }
            "exp" => match arg {
                Value::Scalar(s) => Ok(Value::Scalar(Scalar::exp(&s).map_err(|x| e(x.to_string()))?)),
                other => Err(e(format!("exp expects a scalar, got a {}", other.kind()))),
            },
            _ => Err(e(format!("unknown function `{name}`"))),
        }
    }

    fn neg(&self, v: Value, col: usize) -> Result<Value, ParseError> {
        let minus_one = Scalar::integer(self.table, -1);
        self.mul(Value::Scalar(minus_one), v, col)
    }

    fn add(&self, a: Value, b: Value, col: usize) -> Result<Value, ParseError> {
        let e = |m: String| ParseError::at(col, m);
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x + &y)),
            (Value::Phase(x), Value::Phase(y)) => Ok(Value::Phase(x.iter().zip(&y).map(|(p, q)| p + q).collect())),
            (Value::Form(x), Value::Form(y)) => Ok(Value::Form(x.try_add(&y).map_err(|x| e(x.to_string()))?)),
            (Value::Form(x), Value::Scalar(y)) | (Value::Scalar(y), Value::Form(x)) if x.degree() == 0 => {
                let y = DifferentialForm::function(x.chart(), y).map_err(|x| e(x.to_string()))?;
                Ok(Value::Form(&x + &y))
            }
            (Value::Vector(x), Value::Vector(y)) => Ok(Value::Vector(x.try_add(&y).map_err(|x| e(x.to_string()))?)),
            (x, y) => Err(e(format!("cannot add a {} and a {}", x.kind(), y.kind()))),
        }
    }

    fn mul(&self, a: Value, b: Value, col: usize) -> Result<Value, ParseError> {
        let e = |m: String| ParseError::at(col, m);
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x * &y)),
            (Value::Scalar(s), Value::Phase(p)) | (Value::Phase(p), Value::Scalar(s)) => match s.as_rational() {
                Some(r) => Ok(Value::Phase(p.iter().map(|x| x * &r).collect())),
                None => Err(e("phases may only be scaled by constants".into())),
            },
            (Value::Scalar(s), Value::Form(f)) | (Value::Form(f), Value::Scalar(s)) => Ok(Value::Form(f.scale(&s))),
            (Value::Scalar(s), Value::Vector(v)) | (Value::Vector(v), Value::Scalar(s)) => {
                Ok(Value::Vector(v.scale(&s)))
            }
            (Value::Form(_), Value::Form(_)) => Err(e("use `^` for the wedge product".into())),
            (x, y) => Err(e(format!("cannot multiply a {} by a {}", x.kind(), y.kind()))),
        }
    }

    fn div(&self, a: Value, b: Value, col: usize) -> Result<Value, ParseError> {
        let r = match &b {
            Value::Scalar(s) => s.as_rational(),
            _ => None,
        };
        match r {
            Some(r) if !r.is_zero() => {
                let inv = Scalar::constant(self.table, r.recip());
                self.mul(Value::Scalar(inv), a, col)
            }
            Some(_) => Err(ParseError::at(col, "division by zero")),
            None => Err(ParseError::at(col, "only division by nonzero rational constants is supported")),
        }
    }

    fn caret(&self, a: Value, b: Value, col: usize) -> Result<Value, ParseError> {
        let e = |m: String| ParseError::at(col, m);
        match (a, b) {
            (Value::Form(x), Value::Form(y)) => Ok(Value::Form(x.wedge(&y).map_err(|x| e(x.to_string()))?)),
            (Value::Scalar(x), Value::Scalar(n)) => {
                let n = n
                    .as_rational()
                    .filter(|r| r.is_integer() && *r >= Rational::zero())
                    .and_then(|r| r.to_integer().to_u32())
                    .ok_or_else(|| e("exponent must be a nonnegative integer".into()))?;
                Ok(Value::Scalar(x.pow(n)))
            }
            (x, y) => Err(e(format!("cannot apply `^` to a {} and a {}", x.kind(), y.kind()))),
        }
    }
}

fn run(src: &str, table: &Arc<VariableTable>, chart: Option<&Arc<Chart>>) -> Result<Value, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError::at(1, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1, table, chart };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

pub fn parse_scalar(table: &Arc<VariableTable>, src: &str) -> Result<Scalar, ParseError> {
    match run(src, table, None)? {
        Value::Scalar(s) => Ok(s),
        Value::Phase(p) if p.iter().all(|x| x.is_zero()) => Ok(Scalar::zero(table)),
        v => Err(ParseError::at(1, format!("expected a scalar, found a {}", v.kind()))),
    }
}

pub fn parse_form(chart: &Arc<Chart>, src: &str) -> Result<DifferentialForm, ParseError> {
    match run(src, chart.table(), Some(chart))? {
        Value::Form(f) => Ok(f),
        Value::Scalar(s) => Ok(DifferentialForm::function(chart, s).expect("chart table")),
        v => Err(ParseError::at(1, format!("expected a form, found a {}", v.kind()))),
    }
}

pub fn parse_vector(chart: &Arc<Chart>, src: &str) -> Result<VectorField, ParseError> {
    match run(src, chart.table(), Some(chart))? {
        Value::Vector(v) => Ok(v),
        Value::Scalar(s) if s.is_zero() => Ok(VectorField::zero(chart)),
        v => Err(ParseError::at(1, format!("expected a vector field, found a {}", v.kind()))),
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}
