//! A small expression language for symbols typed on the command line:
//! complex constants, `z`, `+ - * / ^`, `exp`, `sin`, `cos`, and implicit
//! multiplication (`0.5z`, `3i`, `(z + 1)(z - 1)`).

use std::fmt;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::series::TruncatedSeries;
use crate::symbols::{Holomorphic, LinearFractionalMap};
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected {found} at offset {pos}")]
    UnexpectedToken { pos: usize, found: String },
    #[error("unknown function or name {0:?}")]
    UnknownName(String),
    #[error("exponent of a non-constant base must be a non-negative integer")]
    BadExponent,
    #[error("division by an expression that vanishes at z = 0")]
    SingularAtOrigin,
    #[error("expression depends on z where a constant was expected")]
    NotConstant,
    #[error("expression evaluates to a non-finite value")]
    NonFinite,
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // scientific notation: 1e-3, 2.5E4
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<f64>().map_err(|_| ExprError::UnexpectedToken { pos: start, found: text })?;
            out.push((start, Token::Num(value)));
        } else if ch.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()·".contains(ch) {
            out.push((i, Token::Op(if ch == '·' { '*' } else { ch })));
            i += 1;
        } else {
            return Err(ExprError::UnexpectedChar { pos: i, ch });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Const(C64),
    Z,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, u32),
    Exp(Box<Node>),
    Sin(Box<Node>),
    Cos(Box<Node>),
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Result<(usize, Token), ExprError> {
        let tok = self.tokens.get(self.pos).cloned().ok_or(ExprError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, op: char) -> Result<(), ExprError> {
        match self.next()? {
            (_, Token::Op(c)) if c == op => Ok(()),
            (pos, tok) => Err(ExprError::UnexpectedToken { pos, found: format!("{tok:?}") }),
        }
    }

    fn sum(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.product()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.product()?;
            lhs = if op == '+' { Node::Add(lhs.into(), rhs.into()) } else { Node::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    lhs = Node::Mul(lhs.into(), self.unary()?.into());
                }
                Some(Token::Op('/')) => {
                    self.pos += 1;
                    lhs = Node::Div(lhs.into(), self.unary()?.into());
                }
                Some(Token::Num(_) | Token::Ident(_) | Token::Op('(')) => {
                    lhs = Node::Mul(lhs.into(), self.power()?.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(Node::Neg(self.unary()?.into()))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            let exponent = self.unary()?;
            return make_power(base, exponent);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let (pos, tok) = self.next()?;
        match tok {
            Token::Num(v) => Ok(Node::Const(C64::new(v, 0.0))),
            Token::Op('(') => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Token::Ident(name) => match name.as_str() {
                "z" => Ok(Node::Z),
                "i" => Ok(Node::Const(C64::new(0.0, 1.0))),
                "pi" => Ok(Node::Const(C64::new(std::f64::consts::PI, 0.0))),
                "exp" | "sin" | "cos" => {
                    self.expect('(')?;
                    let arg = Box::new(self.sum()?);
                    self.expect(')')?;
                    Ok(match name.as_str() {
                        "exp" => Node::Exp(arg),
                        "sin" => Node::Sin(arg),
                        _ => Node::Cos(arg),
                    })
                }
                _ => Err(ExprError::UnknownName(name)),
            },
            other => Err(ExprError::UnexpectedToken { pos, found: format!("{other:?}") }),
        }
    }
}

fn make_power(base: Node, exponent: Node) -> Result<Node, ExprError> {
    if !exponent.is_constant() {
        return Err(ExprError::BadExponent);
    }
    let e = exponent.eval(C64::new(0.0, 0.0));
    if base.is_constant() {
        return Ok(Node::Const(base.eval(C64::new(0.0, 0.0)).powc(e)));
    }
    let k = e.re.round();
    if e.im != 0.0 || (e.re - k).abs() > 1e-12 || !(0.0..=1e4).contains(&k) {
        return Err(ExprError::BadExponent);
    }
    Ok(Node::Pow(base.into(), k as u32))
}

impl Node {
    fn is_constant(&self) -> bool {
        match self {
            Node::Const(_) => true,
            Node::Z => false,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => a.is_constant() && b.is_constant(),
            Node::Neg(a) | Node::Pow(a, _) | Node::Exp(a) | Node::Sin(a) | Node::Cos(a) => a.is_constant(),
        }
    }

    fn eval(&self, z: C64) -> C64 {
        match self {
            Node::Const(c) => *c,
            Node::Z => z,
            Node::Add(a, b) => a.eval(z) + b.eval(z),
            Node::Sub(a, b) => a.eval(z) - b.eval(z),
            Node::Mul(a, b) => a.eval(z) * b.eval(z),
            Node::Div(a, b) => a.eval(z) / b.eval(z),
            Node::Neg(a) => -a.eval(z),
            Node::Pow(a, k) => a.eval(z).powu(*k),
            Node::Exp(a) => a.eval(z).exp(),
            Node::Sin(a) => a.eval(z).sin(),
            Node::Cos(a) => a.eval(z).cos(),
        }
    }

    fn series(&self, order: usize) -> Result<TruncatedSeries, ExprError> {
        let out = match self {
            Node::Const(c) => TruncatedSeries::constant(*c, order),
            Node::Z => TruncatedSeries::identity(order),
            Node::Add(a, b) => a.series(order)?.add(&b.series(order)?).expect("equal orders"),
            Node::Sub(a, b) => a.series(order)?.sub(&b.series(order)?).expect("equal orders"),
            Node::Mul(a, b) => a.series(order)?.mul(&b.series(order)?).expect("equal orders"),
            Node::Div(a, b) => a.series(order)?.div(&b.series(order)?).map_err(|_| ExprError::SingularAtOrigin)?,
            Node::Neg(a) => a.series(order)?.scale(C64::new(-1.0, 0.0)),
            Node::Pow(a, k) => a.series(order)?.powi(*k),
            Node::Exp(a) => a.series(order)?.exp(),
            Node::Sin(a) => a.series(order)?.sin(),
            Node::Cos(a) => a.series(order)?.cos(),
        };
        Ok(out)
    }

    /// `(numerator, denominator)` polynomial coefficients when the node is a
    /// rational function of `z`.
    fn rational(&self) -> Option<(Vec<C64>, Vec<C64>)> {
        let one = vec![C64::new(1.0, 0.0)];
        let r = match self {
            Node::Const(c) => (vec![*c], one),
            Node::Z => (vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)], one),
            Node::Add(a, b) | Node::Sub(a, b) => {
                let (na, da) = a.rational()?;
                let (nb, db) = b.rational()?;
                let sign = if matches!(self, Node::Add(..)) { 1.0 } else { -1.0 };
                if da == db {
                    (poly_add(&na, &poly_scale(&nb, sign)), da)
                } else {
                    (poly_add(&poly_mul(&na, &db), &poly_scale(&poly_mul(&nb, &da), sign)), poly_mul(&da, &db))
                }
            }
            Node::Mul(a, b) => {
                let (na, da) = a.rational()?;
                let (nb, db) = b.rational()?;
                (poly_mul(&na, &nb), poly_mul(&da, &db))
            }
            Node::Div(a, b) => {
                let (na, da) = a.rational()?;
                let (nb, db) = b.rational()?;
                (poly_mul(&na, &db), poly_mul(&da, &nb))
            }
            Node::Neg(a) => {
                let (n, d) = a.rational()?;
                (poly_scale(&n, -1.0), d)
            }
            Node::Pow(a, k) => {
                let (n, d) = a.rational()?;
                let mut pn = one.clone();
                let mut pd = one;
                for _ in 0..*k {
                    pn = poly_mul(&pn, &n);
                    pd = poly_mul(&pd, &d);
                }
                (pn, pd)
            }
            Node::Exp(_) | Node::Sin(_) | Node::Cos(_) => return None,
        };
        Some((trim(r.0), trim(r.1)))
    }

    fn analytic_radius(&self) -> f64 {
        match self {
            Node::Const(_) | Node::Z => f64::INFINITY,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => a.analytic_radius().min(b.analytic_radius()),
            Node::Neg(a) | Node::Pow(a, _) | Node::Exp(a) | Node::Sin(a) | Node::Cos(a) => a.analytic_radius(),
            Node::Div(a, b) => a.analytic_radius().min(b.analytic_radius()).min(b.zero_radius()),
        }
    }

    /// Smallest modulus of a zero; exact for rational nodes, scanned otherwise.
    fn zero_radius(&self) -> f64 {
        if let Node::Exp(_) = self {
            return f64::INFINITY;
        }
        if let Some((num, _)) = self.rational() {
            return smallest_root_modulus(&num);
        }
        // scan outward on circles until |f| dips far below its typical size
        let samples = 512;
        let mut radius = 1.0;
        while radius < 4.0 {
            let values: Vec<f64> = (0..samples)
                .map(|k| self.eval(C64::from_polar(radius, std::f64::consts::TAU * k as f64 / samples as f64)).norm())
                .collect();
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(0.0, f64::max);
            if !(lo > 1e-3 * hi) {
                return (radius - 0.05).max(1.0);
            }
            radius += 0.05;
        }
        f64::INFINITY
    }
}

fn trim(mut p: Vec<C64>) -> Vec<C64> {
    let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while p.len() > 1 && p.last().is_some_and(|c| c.norm() <= 1e-15 * scale) {
        p.pop();
    }
    p
}

fn poly_add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

fn poly_scale(a: &[C64], s: f64) -> Vec<C64> {
    a.iter().map(|c| c * s).collect()
}

fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn smallest_root_modulus(poly: &[C64]) -> f64 {
    let degree = poly.len() - 1;
    if degree == 0 {
        return f64::INFINITY;
    }
    let lead = poly[degree];
    // companion matrix of the monic polynomial
    let mut companion = DMatrix::<C64>::zeros(degree, degree);
    for k in 0..degree {
        companion[(0, k)] = -poly[degree - 1 - k] / lead;
        if k + 1 < degree {
            companion[(k + 1, k)] = C64::new(1.0, 0.0);
        }
    }
    match companion.schur().eigenvalues() {
        Some(eigs) => eigs.iter().map(|e| e.norm()).fold(f64::INFINITY, f64::min),
        None => 1.0,
    }
}

/// A parsed symbol expression.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
}

impl Expr {
    pub fn parse(source: &str) -> Result<Self, ExprError> {
        let tokens = tokenize(source)?;
        if tokens.is_empty() {
            return Err(ExprError::UnexpectedEnd);
        }
        let mut parser = Parser { tokens, pos: 0 };
        let root = parser.sum()?;
        if let Some((pos, tok)) = parser.tokens.get(parser.pos) {
            return Err(ExprError::UnexpectedToken { pos: *pos, found: format!("{tok:?}") });
        }
        let expr = Self { source: source.trim().to_string(), root };
        // every division must be regular at the origin for a Taylor series to exist
        let probe = expr.root.series(4)?;
        if probe.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(ExprError::NonFinite);
        }
        Ok(expr)
    }

    /// Parses and evaluates an expression that must not involve `z`.
    pub fn parse_constant(source: &str) -> Result<C64, ExprError> {
        let expr = Self::parse(source)?;
        if !expr.is_constant() {
            return Err(ExprError::NotConstant);
        }
        let value = expr.root.eval(C64::new(0.0, 0.0));
        if value.is_finite() {
            Ok(value)
        } else {
            Err(ExprError::NonFinite)
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_constant(&self) -> bool {
        self.root.is_constant()
    }

    /// The expression as a linear fractional map, when it is one.
    pub fn as_lft(&self) -> Option<LinearFractionalMap> {
        let (num, den) = self.root.rational()?;
        if num.len() > 2 || den.len() > 2 {
            return None;
        }
        let at = |p: &[C64], k: usize| p.get(k).copied().unwrap_or(C64::new(0.0, 0.0));
        LinearFractionalMap::new(at(&num, 1), at(&num, 0), at(&den, 1), at(&den, 0)).ok()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Holomorphic for Expr {
    fn series(&self, order: usize) -> TruncatedSeries {
        self.root.series(order).expect("regularity at the origin is checked at parse time")
    }

    fn eval(&self, z: C64) -> C64 {
        self.root.eval(z)
    }

    fn analytic_radius(&self) -> f64 {
        self.root.analytic_radius()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constants() {
        assert_eq!(Expr::parse_constant("5").unwrap(), c(5.0, 0.0));
        assert_eq!(Expr::parse_constant("0.3+0.4i").unwrap(), c(0.3, 0.4));
        assert_eq!(Expr::parse_constant("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(Expr::parse_constant("1e-3 - 2.5E1i").unwrap(), c(1e-3, -25.0));
        assert!((Expr::parse_constant("exp(i pi)").unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(Expr::parse_constant("z"), Err(ExprError::NotConstant));
    }

    #[test]
    fn series_of_examples() {
        let e = Expr::parse("exp(sin(z))").unwrap();
        let oracle = TruncatedSeries::identity(8).sin().exp();
        assert!(e.series(8).max_abs_diff(&oracle) < 1e-15);
        let e = Expr::parse("-z").unwrap();
        assert_eq!(e.series(3), TruncatedSeries::identity(3).scale(c(-1.0, 0.0)));
        let e = Expr::parse("exp(z^2)").unwrap();
        assert!((e.series(4).coeff(4) - c(0.5, 0.0)).norm() < 1e-15);
        let e = Expr::parse("2z(1 - z)").unwrap();
        assert_eq!(e.series(3).coeffs(), &[c(0.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn lft_literals() {
        let e = Expr::parse("(0.5 z + 0.2)/(0.3i z + 1)").unwrap();
        let m = e.as_lft().unwrap();
        let expected = LinearFractionalMap::new(c(0.5, 0.0), c(0.2, 0.0), c(0.0, 0.3), c(1.0, 0.0)).unwrap();
        assert!(m.distance(&expected) < 1e-15);
        assert!((e.analytic_radius() - 1.0 / 0.3).abs() < 1e-12);
        assert!(Expr::parse("-z").unwrap().as_lft().is_some());
        assert!(Expr::parse("z^2").unwrap().as_lft().is_none());
        assert!(Expr::parse("exp(z)").unwrap().as_lft().is_none());
    }

    #[test]
    fn errors() {
        assert!(matches!(Expr::parse("z +"), Err(ExprError::UnexpectedEnd)));
        assert!(matches!(Expr::parse("foo(z)"), Err(ExprError::UnknownName(_))));
        assert!(matches!(Expr::parse("1/z"), Err(ExprError::SingularAtOrigin)));
        assert!(matches!(Expr::parse("z^0.5"), Err(ExprError::BadExponent)));
        assert!(matches!(Expr::parse("z $"), Err(ExprError::UnexpectedChar { .. })));
        assert!(matches!(Expr::parse("(z"), Err(ExprError::UnexpectedEnd)));
    }

    #[test]
    fn evaluation_matches_series() {
        let e = Expr::parse("exp(0.3z + 0.1z^3)/(1 - 0.5z)").unwrap();
        assert!((e.analytic_radius() - 2.0).abs() < 1e-9);
        let s = e.series(80);
        let z = c(0.3, -0.2);
        assert!((s.horner(z) - e.eval(z)).norm() < 1e-13);
    }
}
