//! Arithmetic expressions in `x`, `y` with symbolic derivatives.
//!
//! Grammar: numbers, `x`, `y`, `+ - * / ^`, unary minus, parentheses and
//! `abs(...)`. Exponents must be constant.

use std::fmt;

use super::field::{Hessian, ScalarField2};
use crate::error::{Error, Result};
use crate::planar::Vec2;

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    X,
    Y,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, f64),
    Neg(Box<Node>),
    Abs(Box<Node>),
    Sgn(Box<Node>),
}

use Node::*;

fn num(v: f64) -> Node {
    Num(v)
}

fn add(a: Node, b: Node) -> Node {
    match (&a, &b) {
        (Num(x), Num(y)) => Num(x + y),
        (Num(z), _) if *z == 0.0 => b,
        (_, Num(z)) if *z == 0.0 => a,
        _ => Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Node, b: Node) -> Node {
    match (&a, &b) {
        (Num(x), Num(y)) => Num(x - y),
        (_, Num(z)) if *z == 0.0 => a,
        (Num(z), _) if *z == 0.0 => neg(b),
        _ => Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Node, b: Node) -> Node {
    match (&a, &b) {
        (Num(x), Num(y)) => Num(x * y),
        (Num(z), _) | (_, Num(z)) if *z == 0.0 => Num(0.0),
        (Num(o), _) if *o == 1.0 => b,
        (_, Num(o)) if *o == 1.0 => a,
        _ => Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Node, b: Node) -> Node {
    match (&a, &b) {
        (Num(z), _) if *z == 0.0 => Num(0.0),
        (_, Num(o)) if *o == 1.0 => a,
        _ => Div(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Node) -> Node {
    match a {
        Num(x) => Num(-x),
        Neg(inner) => *inner,
        _ => Neg(Box::new(a)),
    }
}

fn pow(a: Node, e: f64) -> Node {
    if e == 0.0 {
        return Num(1.0);
    }
    if e == 1.0 {
        return a;
    }
    match a {
        Num(x) => Num(x.powf(e)),
        _ => Pow(Box::new(a), e),
    }
}

impl Node {
    fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Num(v) => *v,
            X => x,
            Y => y,
            Add(a, b) => a.eval(x, y) + b.eval(x, y),
            Sub(a, b) => a.eval(x, y) - b.eval(x, y),
            Mul(a, b) => a.eval(x, y) * b.eval(x, y),
            Div(a, b) => a.eval(x, y) / b.eval(x, y),
            Pow(a, e) => {
                let b = a.eval(x, y);
                if e.fract() == 0.0 && e.abs() < 64.0 {
                    b.powi(*e as i32)
                } else {
                    b.powf(*e)
                }
            }
            Neg(a) => -a.eval(x, y),
            Abs(a) => a.eval(x, y).abs(),
            Sgn(a) => {
                let v = a.eval(x, y);
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Derivative with respect to `x` (`wrt_x`) or `y`.
    fn diff(&self, wrt_x: bool) -> Node {
        match self {
            Num(_) => num(0.0),
            X => num(if wrt_x { 1.0 } else { 0.0 }),
            Y => num(if wrt_x { 0.0 } else { 1.0 }),
            Add(a, b) => add(a.diff(wrt_x), b.diff(wrt_x)),
            Sub(a, b) => sub(a.diff(wrt_x), b.diff(wrt_x)),
            Mul(a, b) => add(
                mul(a.diff(wrt_x), (**b).clone()),
                mul((**a).clone(), b.diff(wrt_x)),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.diff(wrt_x), (**b).clone()),
                    mul((**a).clone(), b.diff(wrt_x)),
                ),
                pow((**b).clone(), 2.0),
            ),
            Pow(a, e) => mul(mul(num(*e), pow((**a).clone(), e - 1.0)), a.diff(wrt_x)),
            Neg(a) => neg(a.diff(wrt_x)),
            Abs(a) => mul(Sgn(a.clone()), a.diff(wrt_x)),
            Sgn(_) => num(0.0),
        }
    }

    fn is_constant(&self) -> bool {
        match self {
            Num(_) => true,
            X | Y => false,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.is_constant() && b.is_constant(),
            Pow(a, _) | Neg(a) | Abs(a) | Sgn(a) => a.is_constant(),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = add(lhs, self.term()?);
            } else if self.eat(b'-') {
                lhs = sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = mul(lhs, self.unary()?);
            } else if self.eat(b'/') {
                lhs = div(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat(b'-') {
            return Ok(neg(self.unary()?));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.unary()?;
            if !e.is_constant() {
                self.pos = at;
                return self.err("exponent must be constant");
            }
            return Ok(pow(base, e.eval(0.0, 0.0)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(X)
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Y)
            }
            Some(b'a') => {
                if self.src[self.pos..].starts_with(b"abs") {
                    self.pos += 3;
                    if !self.eat(b'(') {
                        return self.err("expected '(' after abs");
                    }
                    let e = self.expr()?;
                    if !self.eat(b')') {
                        return self.err("expected ')'");
                    }
                    Ok(Abs(Box::new(e)))
                } else {
                    self.err("unknown identifier")
                }
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                if self.pos < self.src.len()
                    && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E')
                {
                    let save = self.pos;
                    self.pos += 1;
                    if self.pos < self.src.len()
                        && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
                    {
                        self.pos += 1;
                    }
                    let digits = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if self.pos == digits {
                        self.pos = save;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match text.parse::<f64>() {
                    Ok(v) => Ok(Num(v)),
                    Err(_) => {
                        self.pos = start;
                        self.err("bad number")
                    }
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parsed expression with exact first and second derivatives.
#[derive(Clone)]
pub struct Expr {
    src: String,
    f: Node,
    fx: Node,
    fy: Node,
    fxx: Node,
    fxy: Node,
    fyy: Node,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let f = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        let fx = f.diff(true);
        let fy = f.diff(false);
        let fxx = fx.diff(true);
        let fxy = fx.diff(false);
        let fyy = fy.diff(false);
        Ok(Expr {
            src: src.to_string(),
            f,
            fx,
            fy,
            fxx,
            fxy,
            fyy,
        })
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.f.eval(x, y)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({:?})", self.src)
    }
}

impl ScalarField2 for Expr {
    fn value(&self, p: &Vec2) -> f64 {
        self.f.eval(p.x, p.y)
    }
    fn gradient(&self, p: &Vec2) -> Vec2 {
        Vec2::new(self.fx.eval(p.x, p.y), self.fy.eval(p.x, p.y))
    }
    fn hessian(&self, p: &Vec2) -> Option<Hessian> {
        Some([
            self.fxx.eval(p.x, p.y),
            self.fxy.eval(p.x, p.y),
            self.fyy.eval(p.x, p.y),
        ])
    }
}
