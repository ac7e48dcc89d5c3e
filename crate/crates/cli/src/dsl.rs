//! The expression language.
//!
//! ```text
//! sum     := term (('+' | '-') term)*
//! term    := unary (('*' unary) | ('/' INT))*
//! unary   := '-' unary | power
//! power   := atom ('^' INT | '^' '[' INT ']')?
//! atom    := INT | NAME | '(' sum ')' | '[' sum ',' sum ']'
//!          | P(m,k; sum) | L(m,k; sum) | T(k,m; sum) | Xt(n,k; sum) | X(n,k; sum)
//!          | x_i(sum) | x(i; sum) | u^[N] | u^[N+o] | u^[N-o]
//! ```
//!
//! Products group to the right; `*` between an operator and a tautological
//! class applies the operator to everything on its right. Integer divisors
//! scale the whole product.
//! `^[d]` is a divided power: a tower on `P(n,0; 1)` or `P(0,n; 1)`, or
//! `v^d / d!` for a tautological class.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use opcalc::combinat::factorial;
use opcalc::env::{Env, EnvElem, EnvGen, Flavor};
use opcalc::jaccalc::{self, XAlgebra, XElem};
use opcalc::liealg::{LBasisElem, LieElem};
use opcalc::models::{TautPoly, TautSpace};
use opcalc::{Rat, RatLie, RatPoly, RatRing};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("type error at line {line}, column {col}: {msg}")]
    Type { line: usize, col: usize, msg: String },
    #[error("evaluation error at line {line}, column {col}: {msg}")]
    Eval { line: usize, col: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    fn syntax(self, msg: impl Into<String>) -> DslError {
        DslError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn typ(self, msg: impl Into<String>) -> DslError {
        DslError::Type { line: self.line, col: self.col, msg: msg.into() }
    }

    fn eval(self, msg: impl ToString) -> DslError {
        DslError::Eval { line: self.line, col: self.col, msg: msg.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Punct(char),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("`{n}`"),
        Tok::Name(s) => format!("`{s}`"),
        Tok::Punct(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), pos));
        } else if "()[],;+-*/^".contains(c) {
            i += 1;
            out.push((Tok::Punct(c), pos));
        } else {
            return Err(pos.syntax(format!("unexpected character `{c}`")));
        }
        col += i - start;
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    P,
    L,
    T,
    Xt,
    X,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Name(String),
    Gen { kind: GenKind, i: i64, j: i64, arg: Box<Expr> },
    Sym { index: u32, arg: Box<Expr> },
    Fundamental(i64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, BigInt),
    Pow(Box<Expr>, u32),
    Divided(Box<Expr>, u32),
    Bracket(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub pos: Pos,
    pub kind: ExprKind,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek() == &Tok::Punct(c)
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.is_punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.pos().syntax(format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn uint(&mut self) -> Result<BigInt, DslError> {
        match self.bump() {
            (Tok::Int(n), _) => Ok(n),
            (t, p) => Err(p.syntax(format!("expected an integer, found {}", describe(&t)))),
        }
    }

    fn small(&mut self) -> Result<u32, DslError> {
        let p = self.pos();
        let n = self.uint()?;
        n.to_u32().ok_or_else(|| p.syntax("integer too large"))
    }

    fn signed(&mut self) -> Result<i64, DslError> {
        let neg = self.is_punct('-');
        if neg {
            self.bump();
        }
        let p = self.pos();
        let n = self.uint()?.to_i64().ok_or_else(|| p.syntax("integer too large"))?;
        Ok(if neg { -n } else { n })
    }

    fn sum(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let kind = if self.is_punct('+') {
                self.bump();
                ExprKind::Add(Box::new(lhs), Box::new(self.term()?))
            } else if self.is_punct('-') {
                self.bump();
                ExprKind::Sub(Box::new(lhs), Box::new(self.term()?))
            } else {
                return Ok(lhs);
            };
            lhs = Expr { pos, kind };
        }
    }

    /// Products group to the right, so operators act on everything after
    /// them; integer divisors are pulled outside.
    fn term(&mut self) -> Result<Expr, DslError> {
        let mut factors = vec![self.unary()?];
        let mut stars = Vec::new();
        let mut divisors = Vec::new();
        loop {
            let pos = self.pos();
            if self.is_punct('*') {
                self.bump();
                stars.push(pos);
                factors.push(self.unary()?);
            } else if self.is_punct('/') {
                self.bump();
                divisors.push((pos, self.uint()?));
            } else {
                break;
            }
        }
        let mut acc = factors.pop().expect("at least one factor");
        while let Some(f) = factors.pop() {
            let pos = stars.pop().expect("one star per extra factor");
            acc = Expr { pos, kind: ExprKind::Mul(Box::new(f), Box::new(acc)) };
        }
        for (pos, d) in divisors {
            acc = Expr { pos, kind: ExprKind::Div(Box::new(acc), d) };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.is_punct('-') {
            let pos = self.pos();
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr { pos, kind: ExprKind::Neg(Box::new(inner)) });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.atom()?;
        if !self.is_punct('^') {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        if self.is_punct('[') {
            self.bump();
            let d = self.small()?;
            self.expect(']')?;
            return Ok(Expr { pos, kind: ExprKind::Divided(Box::new(base), d) });
        }
        let e = self.small()?;
        Ok(Expr { pos, kind: ExprKind::Pow(Box::new(base), e) })
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let (tok, pos) = self.bump();
        let kind = match tok {
            Tok::Int(n) => ExprKind::Int(n),
            Tok::Punct('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                return Ok(e);
            }
            Tok::Punct('[') => {
                let a = self.sum()?;
                self.expect(',')?;
                let b = self.sum()?;
                self.expect(']')?;
                ExprKind::Bracket(Box::new(a), Box::new(b))
            }
            Tok::Name(name) if self.is_punct('(') => self.call(&name, pos)?,
            Tok::Name(name) if name == "u" && self.is_punct('^') => self.fundamental()?,
            Tok::Name(name) => ExprKind::Name(name),
            t => return Err(pos.syntax(format!("unexpected {}", describe(&t)))),
        };
        Ok(Expr { pos, kind })
    }

    fn call(&mut self, name: &str, pos: Pos) -> Result<ExprKind, DslError> {
        self.expect('(')?;
        let kind = match name {
            "P" => Some(GenKind::P),
            "L" => Some(GenKind::L),
            "T" => Some(GenKind::T),
            "Xt" => Some(GenKind::Xt),
            "X" => Some(GenKind::X),
            _ => None,
        };
        if let Some(kind) = kind {
            let i = self.signed()?;
            self.expect(',')?;
            let j = self.signed()?;
            self.expect(';')?;
            let arg = self.sum()?;
            self.expect(')')?;
            if kind != GenKind::Xt && (i < 0 || j < 0) {
                return Err(pos.syntax(format!("{name} needs non-negative indices")));
            }
            return Ok(ExprKind::Gen { kind, i, j, arg: Box::new(arg) });
        }
        let index = if name == "x" {
            let i = self.small()?;
            self.expect(';')?;
            i
        } else if let Some(i) = name.strip_prefix("x_").and_then(|s| s.parse::<u32>().ok()) {
            i
        } else {
            return Err(pos.syntax(format!("unknown function `{name}`")));
        };
        let arg = self.sum()?;
        self.expect(')')?;
        Ok(ExprKind::Sym { index, arg: Box::new(arg) })
    }

    fn fundamental(&mut self) -> Result<ExprKind, DslError> {
        self.expect('^')?;
        self.expect('[')?;
        match self.bump() {
            (Tok::Name(n), _) if n == "N" => {}
            (t, p) => return Err(p.syntax(format!("expected `N`, found {}", describe(&t)))),
        }
        let mut offset = 0;
        if self.is_punct('+') || self.is_punct('-') {
            let neg = self.is_punct('-');
            self.bump();
            let p = self.pos();
            let n = self.uint()?.to_i64().ok_or_else(|| p.syntax("integer too large"))?;
            offset = if neg { -n } else { n };
        }
        self.expect(']')?;
        Ok(ExprKind::Fundamental(offset))
    }
}

pub fn parse(text: &str) -> Result<Expr, DslError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.sum()?;
    if p.peek() != &Tok::End {
        return Err(p.pos().syntax(format!("unexpected {}", describe(p.peek()))));
    }
    Ok(e)
}

/// Which towers occur; decides the flavor of the operator algebra.
fn towers(e: &Expr, rows: &mut bool, cols: &mut bool) {
    use ExprKind::*;
    match &e.kind {
        Divided(b, _) => {
            if let Gen { kind: GenKind::P, i, j, .. } = &b.kind {
                if *j == 0 {
                    *rows = true;
                } else if *i == 0 {
                    *cols = true;
                }
            }
            towers(b, rows, cols);
        }
        Gen { arg, .. } | Sym { arg, .. } => towers(arg, rows, cols),
        Neg(a) | Div(a, _) | Pow(a, _) => towers(a, rows, cols),
        Add(a, b) | Sub(a, b) | Mul(a, b) | Bracket(a, b) => {
            towers(a, rows, cols);
            towers(b, rows, cols);
        }
        Int(_) | Name(_) | Fundamental(_) => {}
    }
}

#[derive(Clone)]
pub enum Value {
    Scalar(RatPoly),
    Lie(RatLie),
    Env(EnvElem<Rat>),
    Taut(TautPoly<Rat>),
    X(XElem<Rat>),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "ring element",
            Value::Lie(_) => "Lie element",
            Value::Env(_) => "algebra element",
            Value::Taut(_) => "tautological class",
            Value::X(_) => "X element",
        }
    }
}

/// Everything an expression can refer to.
pub struct Context {
    ring: Arc<RatRing>,
    space: Arc<TautSpace<Rat>>,
    xalg: Result<XAlgebra<Rat>, String>,
}

struct Eval<'a> {
    cx: &'a Context,
    env: Arc<Env<Rat>>,
}

fn constant(c: Rat) -> RatPoly {
    RatPoly::constant(c)
}

impl Context {
    pub fn new(ring: &Arc<RatRing>, space: Arc<TautSpace<Rat>>) -> Self {
        let xalg = XAlgebra::new(ring, true).map_err(|e| e.to_string());
        Context { ring: Arc::clone(ring), space, xalg }
    }

    pub fn ring(&self) -> &Arc<RatRing> {
        &self.ring
    }

    pub fn space(&self) -> &Arc<TautSpace<Rat>> {
        &self.space
    }

    pub fn parse_expr(&self, text: &str) -> Result<Value, DslError> {
        self.eval(&parse(text)?)
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, DslError> {
        let (mut rows, mut cols) = (false, false);
        towers(e, &mut rows, &mut cols);
        let flavor = match (rows, cols) {
            (false, false) => Flavor::Plain,
            (true, false) => Flavor::Row,
            (false, true) => Flavor::Col,
            (true, true) => Flavor::Heisenberg,
        };
        Eval { cx: self, env: Env::new(&self.ring, flavor) }.value(e)
    }

    pub fn show(&self, v: &Value) -> String {
        match v {
            Value::Scalar(p) => self.ring.show(p),
            Value::Lie(x) => x.to_string(),
            Value::Env(x) => x.to_string(),
            Value::Taut(p) => self.space.show(p),
            Value::X(x) => match &self.xalg {
                Ok(a) => a.show(x),
                Err(_) => "0".into(),
            },
        }
    }
}

impl Eval<'_> {
    fn xalg(&self, pos: Pos) -> Result<&XAlgebra<Rat>, DslError> {
        self.cx.xalg.as_ref().map_err(|e| pos.eval(e))
    }

    fn scalar(&self, e: &Expr) -> Result<RatPoly, DslError> {
        match self.value(e)? {
            Value::Scalar(p) => Ok(p),
            v => Err(e.pos.typ(format!("expected a ring element, found {}", v.kind()))),
        }
    }

    fn value(&self, e: &Expr) -> Result<Value, DslError> {
        let ring = &self.cx.ring;
        let pos = e.pos;
        Ok(match &e.kind {
            ExprKind::Int(n) => Value::Scalar(constant(Rat::from_integer(n.clone()))),
            ExprKind::Name(n) => {
                let p = if n == "N" { ring.formal_n() } else { ring.gen(n).map_err(|err| pos.eval(err))? };
                Value::Scalar(p)
            }
            ExprKind::Gen { kind, i, j, arg } => {
                let a = self.scalar(arg)?;
                self.generator(*kind, *i, *j, &a, pos)?
            }
            ExprKind::Sym { index, arg } => {
                let a = self.scalar(arg)?;
                if *index == 0 && ring.pushforward(&a).is_err() {
                    return Err(pos.eval(format!("no pushforward for `{}`", ring.show(&a))));
                }
                Value::Taut(self.cx.space.symbol(*index, &a))
            }
            ExprKind::Fundamental(o) => Value::Taut(self.cx.space.fundamental(*o).map_err(|err| pos.eval(err))?),
            ExprKind::Neg(a) => {
                let v = self.value(a)?;
                self.scale(v, &constant(-Rat::one()))
            }
            ExprKind::Add(a, b) => self.add(self.value(a)?, self.value(b)?, pos, false)?,
            ExprKind::Sub(a, b) => self.add(self.value(a)?, self.value(b)?, pos, true)?,
            ExprKind::Mul(a, b) => self.mul(self.value(a)?, self.value(b)?, pos)?,
            ExprKind::Div(a, n) => {
                if n.is_zero() {
                    return Err(pos.eval("division by zero"));
                }
                let v = self.value(a)?;
                self.scale(v, &constant(Rat::new(BigInt::one(), n.clone())))
            }
            ExprKind::Pow(a, n) => self.pow(self.value(a)?, *n, pos)?,
            ExprKind::Divided(a, d) => self.divided(a, *d, pos)?,
            ExprKind::Bracket(a, b) => self.bracket(self.value(a)?, self.value(b)?, pos)?,
        })
    }

    fn generator(&self, kind: GenKind, i: i64, j: i64, a: &RatPoly, pos: Pos) -> Result<Value, DslError> {
        let ring = &self.cx.ring;
        let (iu, ju) = (i as u32, j as u32);
        Ok(match kind {
            GenKind::P => Value::Lie(LieElem::p(ring, iu, ju, a)),
            GenKind::L => {
                let l = LBasisElem::l(ring, iu, ju, a);
                Value::Lie(l.to_p().map_err(|err| pos.eval(err))?)
            }
            GenKind::T => {
                let t = jaccalc::t_from_p(ring, iu, ju, a).map_err(|err| pos.eval(err))?;
                Value::Env(t.to_env(&self.env).map_err(|err| pos.eval(err))?)
            }
            GenKind::Xt => Value::X(self.xalg(pos)?.letter(i, j, a)),
            GenKind::X => Value::X(self.xalg(pos)?.x_basis(iu, ju, a).map_err(|err| pos.eval(err))?),
        })
    }

    fn scale(&self, v: Value, c: &RatPoly) -> Value {
        let ring = &self.cx.ring;
        match v {
            Value::Scalar(p) => Value::Scalar(ring.mul(c, &p)),
            Value::Lie(x) => Value::Lie(x.scaled(c)),
            Value::Env(x) => Value::Env(x.scaled(c)),
            Value::Taut(p) => Value::Taut(self.cx.space.scale(&p, c)),
            Value::X(x) => match &self.cx.xalg {
                Ok(a) => Value::X(a.scale(&x, c)),
                Err(_) => Value::X(x),
            },
        }
    }

    fn to_env(&self, v: Value) -> Value {
        match v {
            Value::Scalar(c) => Value::Env(EnvElem::scalar(&self.env, &c)),
            Value::Lie(x) => Value::Env(EnvElem::from_lie(&self.env, &x)),
            v => v,
        }
    }

    /// Bring two values to a common type for addition.
    fn unify(&self, a: Value, b: Value, pos: Pos) -> Result<(Value, Value), DslError> {
        use Value::*;
        Ok(match (a, b) {
            (Scalar(c), Taut(p)) => (Taut(self.cx.space.scale(&TautPoly::one(), &c)), Taut(p)),
            (Taut(p), Scalar(c)) => (Taut(p), Taut(self.cx.space.scale(&TautPoly::one(), &c))),
            (Scalar(c), X(x)) => (X(self.xalg(pos)?.scalar(&c)), X(x)),
            (X(x), Scalar(c)) => (X(x), X(self.xalg(pos)?.scalar(&c))),
            (a @ (Scalar(_) | Lie(_) | Env(_)), b @ (Scalar(_) | Lie(_) | Env(_))) => {
                if std::mem::discriminant(&a) == std::mem::discriminant(&b) {
                    (a, b)
                } else {
                    (self.to_env(a), self.to_env(b))
                }
            }
            (a, b) => {
                if std::mem::discriminant(&a) != std::mem::discriminant(&b) {
                    return Err(pos.typ(format!("cannot add {} and {}", a.kind(), b.kind())));
                }
                (a, b)
            }
        })
    }

    fn add(&self, a: Value, b: Value, pos: Pos, subtract: bool) -> Result<Value, DslError> {
        let b = if subtract { self.scale(b, &constant(-Rat::one())) } else { b };
        let err = |e: opcalc::env::EnvError| pos.eval(e);
        Ok(match self.unify(a, b, pos)? {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.plus(&y)),
            (Value::Lie(x), Value::Lie(y)) => Value::Lie(x.plus(&y)),
            (Value::Env(x), Value::Env(y)) => Value::Env(x.plus(&y).map_err(err)?),
            (Value::Taut(x), Value::Taut(y)) => Value::Taut(x.plus(&y)),
            (Value::X(x), Value::X(y)) => Value::X(x.plus(&y)),
            _ => unreachable!("unify returns matching kinds"),
        })
    }

    fn mul(&self, a: Value, b: Value, pos: Pos) -> Result<Value, DslError> {
        use Value::*;
        let err = |e: opcalc::env::EnvError| pos.eval(e);
        Ok(match (a, b) {
            (Scalar(c), v) | (v, Scalar(c)) => self.scale(v, &c),
            (x @ (Lie(_) | Env(_)), y @ (Lie(_) | Env(_))) => match (self.to_env(x), self.to_env(y)) {
                (Env(x), Env(y)) => Env(x.mul(&y).map_err(err)?),
                _ => unreachable!("promoted to the algebra"),
            },
            (Lie(x), Taut(p)) => Taut(self.cx.space.apply_lie(&x, &p)),
            (Env(x), Taut(p)) => Taut(self.cx.space.apply_env(&x, &p).map_err(|e| pos.eval(e))?),
            (Taut(x), Taut(y)) => Taut(self.cx.space.mul(&x, &y)),
            (X(x), X(y)) => X(self.xalg(pos)?.mul(&x, &y)),
            (a, b) => return Err(pos.typ(format!("cannot multiply {} by {}", a.kind(), b.kind()))),
        })
    }

    fn pow(&self, a: Value, n: u32, pos: Pos) -> Result<Value, DslError> {
        let one = match &a {
            Value::Scalar(_) => Value::Scalar(RatPoly::one()),
            Value::Lie(_) | Value::Env(_) => Value::Env(EnvElem::one(&self.env)),
            Value::Taut(_) => Value::Taut(TautPoly::one()),
            Value::X(_) => Value::X(self.xalg(pos)?.scalar(&RatPoly::one())),
        };
        let mut acc = one;
        for _ in 0..n {
            acc = self.mul(acc, a.clone(), pos)?;
        }
        Ok(acc)
    }

    fn divided(&self, base: &Expr, d: u32, pos: Pos) -> Result<Value, DslError> {
        if let ExprKind::Gen { kind: GenKind::P, i, j, arg } = &base.kind {
            if arg.kind != ExprKind::Int(BigInt::one()) || (*i != 0 && *j != 0) {
                return Err(pos.typ("towers exist only for P(n,0; 1) and P(0,n; 1)"));
            }
            let g = if *j == 0 { EnvGen::Row { n: *i as u32, d } } else { EnvGen::Col { n: *j as u32, d } };
            return Ok(Value::Env(EnvElem::letter(&self.env, g).map_err(|e| pos.eval(e))?));
        }
        match self.value(base)? {
            Value::Taut(p) => {
                let v = self.pow(Value::Taut(p), d, pos)?;
                let inv = Rat::new(BigInt::one(), factorial(d as u64));
                Ok(self.scale(v, &constant(inv)))
            }
            v => Err(pos.typ(format!("no divided powers of a {}", v.kind()))),
        }
    }

    fn bracket(&self, a: Value, b: Value, pos: Pos) -> Result<Value, DslError> {
        use Value::*;
        Ok(match (a, b) {
            (Lie(x), Lie(y)) => Lie(x.bracket(&y).map_err(|e| pos.eval(e))?),
            (x @ (Lie(_) | Env(_)), y @ (Lie(_) | Env(_))) => match (self.to_env(x), self.to_env(y)) {
                (Env(x), Env(y)) => Env(x.commutator(&y).map_err(|e| pos.eval(e))?),
                _ => unreachable!("promoted to the algebra"),
            },
            (X(x), X(y)) => X(self.xalg(pos)?.commutator(&x, &y)),
            (a, b) => return Err(pos.typ(format!("cannot bracket {} with {}", a.kind(), b.kind()))),
        })
    }
}
