//! Polynomial and series input grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! atom   := number ('/' number)? | 'i' | 'x' | 'y' | 't' | '(' expr ')'
//! ```
//!
//! Exponents are nonnegative integers; series input also accepts
//! `y^(p/q)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use puiseux_core::algebra::rat::{int, is_integer, Rat};
use puiseux_core::algebra::{GaussRat, MPoly, Ring};
use puiseux_core::series::{PuiseuxSeries, Series};
use puiseux_core::algebra::Coeff;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Exponents of `(x, y, t)`; rational so that series can share the parser.
type Mono = [Rat; 3];

#[derive(Clone, Debug, Default)]
struct Expr(BTreeMap<Mono, GaussRat>);

impl Expr {
    fn constant(c: GaussRat) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert([int(0), int(0), int(0)], c);
        }
        Expr(m)
    }

    fn var(i: usize) -> Self {
        let mut e = [int(0), int(0), int(0)];
        e[i] = int(1);
        Expr(BTreeMap::from([(e, GaussRat::one())]))
    }

    fn add(mut self, o: Expr, sign: bool) -> Self {
        for (m, c) in o.0 {
            let c = if sign { c } else { c.neg() };
            let s = self.0.remove(&m).map_or(c.clone(), |a| a.add(&c));
            if !s.is_zero() {
                self.0.insert(m, s);
            }
        }
        self
    }

    fn mul(&self, o: &Expr) -> Self {
        let mut out = Expr::default();
        for (a, ca) in &self.0 {
            for (b, cb) in &o.0 {
                let m = [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]];
                out = out.add(Expr(BTreeMap::from([(m, ca.mul(cb))])), true);
            }
        }
        out
    }

    /// A single monomial raised to a rational power.
    fn monomial_pow(&self, e: &Rat) -> Option<Self> {
        if self.0.len() != 1 {
            return None;
        }
        let (m, c) = self.0.iter().next().unwrap();
        if !c.is_one() {
            return None;
        }
        Some(Expr(BTreeMap::from([([&m[0] * e, &m[1] * e, &m[2] * e], GaussRat::one())])))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    series: bool,
}

fn position(src: &str, pos: usize) -> (usize, usize) {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl<'a> Parser<'a> {
    fn err<T>(&self, at: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, column) = position(self.src, at);
        Err(ParseError { line, column, message: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let at = self.pos;
            match self.peek() {
                Some(d) => self.err(at, format!("expected '{c}', found '{d}'")),
                None => self.err(at, format!("expected '{c}', found end of input")),
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].chars().take_while(|c| c.is_ascii_digit()).count();
        if len == 0 {
            return self.err(start, "expected a number");
        }
        self.pos += len;
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?, true);
            } else if self.eat('-') {
                acc = acc.add(self.term()?, false);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::default().add(self.unary()?, false));
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<Rat, ParseError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        if self.peek() == Some('-') {
            return self.err(at, "negative exponent");
        }
        if self.series && self.eat('(') {
            let p = self.integer()?;
            let q = if self.eat('/') { self.integer()? } else { BigInt::from(1) };
            if q.is_zero() {
                return self.err(at, "zero denominator");
            }
            self.expect(')')?;
            return Ok(Rat::new(p, q));
        }
        Ok(Rat::from_integer(self.integer()?))
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.exponent()?;
        if is_integer(&e) {
            let n: u32 = match e.to_integer().try_into() {
                Ok(n) => n,
                Err(_) => return self.err(at, "exponent too large"),
            };
            let mut acc = Expr::constant(GaussRat::one());
            for _ in 0..n {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        match base.monomial_pow(&e) {
            Some(m) => Ok(m),
            None => self.err(at, "fractional exponents apply to a bare variable"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.integer()?;
                let save = self.pos;
                // `p/q` is a rational literal only when a digit follows
                if self.eat('/') {
                    if matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        let q = self.integer()?;
                        if q.is_zero() {
                            return self.err(at, "zero denominator");
                        }
                        return Ok(Expr::constant(GaussRat::real(Rat::new(p, q))));
                    }
                    self.pos = save;
                    return self.err(save, "division is only allowed between integer literals");
                }
                Ok(Expr::constant(GaussRat::real(Rat::from_integer(p))))
            }
            Some(c) if c.is_alphabetic() => {
                let len: usize = self.src[self.pos..]
                    .chars()
                    .take_while(|c| c.is_alphanumeric() || *c == '_')
                    .map(char::len_utf8)
                    .sum();
                let name = &self.src[self.pos..self.pos + len];
                let v = match name {
                    "x" => Expr::var(0),
                    "y" => Expr::var(1),
                    "t" => Expr::var(2),
                    "i" => Expr::constant(GaussRat::new(int(0), int(1))),
                    _ => return self.err(at, format!("unknown variable '{name}'")),
                };
                self.pos += len;
                Ok(v)
            }
            Some(c) => self.err(at, format!("unexpected '{c}'")),
            None => self.err(at, "unexpected end of input"),
        }
    }
}

fn parse_expr(src: &str, series: bool) -> Result<Expr, ParseError> {
    let mut p = Parser { src, pos: 0, series };
    let e = p.expr()?;
    let at = p.pos;
    match p.peek() {
        None => Ok(e),
        Some(c) => p.err(at, format!("unexpected '{c}'")),
    }
}

/// Parse a polynomial in `x, y, t` with Gaussian rational coefficients.
pub fn parse_poly(src: &str) -> Result<MPoly, ParseError> {
    let e = parse_expr(src, false)?;
    let mut out = MPoly::zero();
    for (m, c) in e.0 {
        let d: Vec<u32> = m.iter().map(|r| r.to_integer().try_into().unwrap_or(u32::MAX)).collect();
        out.add_term([d[0], d[1], d[2]], c);
    }
    Ok(out)
}

/// Parse a Puiseux series in `y`, e.g. `y^(3/2) - 2*i*y^(7/4) + O(y^2)`.
pub fn parse_series(src: &str) -> Result<PuiseuxSeries, ParseError> {
    let (body, trunc) = match src.rfind("O(") {
        Some(at) => {
            let head = src[..at].trim_end();
            let head = head.strip_suffix('+').unwrap_or(if head.is_empty() { "0" } else { head });
            let inner = src[at + 2..].trim_end().strip_suffix(')').ok_or_else(|| {
                let (line, column) = position(src, at);
                ParseError { line, column, message: "unclosed O(".into() }
            })?;
            let e = parse_expr(inner, true).map_err(|mut e| {
                let (line, column) = position(src, at + 2);
                e.line += line - 1;
                if e.line == line {
                    e.column += column - 1;
                }
                e
            })?;
            let order = match e.0.iter().next() {
                Some((m, c)) if e.0.len() == 1 && c.is_one() && m[0].is_zero() && m[2].is_zero() => m[1].clone(),
                _ => {
                    let (line, column) = position(src, at);
                    return Err(ParseError { line, column, message: "O(...) must hold a power of y".into() });
                }
            };
            (if head.trim().is_empty() { "0" } else { head }, Some(order))
        }
        None => (src, None),
    };
    let e = parse_expr(body, true)?;
    let mut terms = Vec::new();
    for (m, c) in e.0 {
        if !m[0].is_zero() || !m[2].is_zero() {
            let (line, column) = position(src, 0);
            return Err(ParseError { line, column, message: "a series may only involve y".into() });
        }
        if m[1].is_negative() {
            let (line, column) = position(src, 0);
            return Err(ParseError { line, column, message: "negative exponent".into() });
        }
        terms.push((m[1].clone(), Coeff::Exact(c)));
    }
    Ok(Series::from_terms(terms, trunc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use puiseux_core::algebra::Var;

    #[test]
    fn paper_inputs() {
        let q = parse_poly("x^4 - t^2*x^2*y^2 + y^4").unwrap();
        let (x, y, t) = (MPoly::var(Var::X), MPoly::var(Var::Y), MPoly::var(Var::T));
        assert_eq!(q, x.pow(4).sub(&t.pow(2).mul(&x.pow(2)).mul(&y.pow(2))).add(&y.pow(4)));
        let g = parse_poly("(x^2-y^4)^2 - y^10").unwrap();
        assert_eq!(g, x.pow(2).sub(&y.pow(4)).pow(2).sub(&y.pow(10)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_poly("x^2 +\n  z*y").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("unknown variable"));
        let e = parse_poly("x^-1").unwrap_err();
        assert_eq!((e.line, e.column, e.message.as_str()), (1, 3, "negative exponent"));
        assert!(parse_poly("x^2 +").is_err());
        assert!(parse_poly("(x").is_err());
        assert!(parse_poly("x/y").is_err());
    }

    #[test]
    fn gaussian_coefficients() {
        let p = parse_poly("(1/2 + 3*i)*x - i").unwrap();
        assert_eq!(p.to_string(), "(1/2 + 3*i)*x - i");
    }

    #[test]
    fn series_with_fractional_exponents() {
        let s = parse_series("y^(3/2) + 2*y^(7/4)").unwrap();
        assert_eq!(s.puiseux_pairs(), vec![Rat::new(3.into(), 2.into()), Rat::new(7.into(), 4.into())]);
        assert!(parse_series("x*y").is_err());
        let t = parse_series("y^(3/2) + O(y^2)").unwrap();
        assert_eq!(t.to_string(), "y^(3/2) + O(y^2)");
        assert!(parse_poly("y^(3/2)").is_err());
    }
}
