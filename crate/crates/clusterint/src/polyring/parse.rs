use num_bigint::BigInt;
use num_traits::One;

use super::monomial::Monomial;
use super::poly::{Poly, Vars};
use super::rational::Q;
use crate::error::{Error, Result};

/// Parses the canonical text form (also accepts extra whitespace and parentheses).
pub fn parse_poly(s: &str, vars: &Vars) -> Result<Poly> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, vars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!("unexpected input at offset {} in {s:?}", p.pos)));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.vars);
        let mut sign = 1;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add_poly(&t) } else { acc.sub_poly(&t) };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul_poly(&f);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected a number at offset {start}")));
        }
        let txt = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        txt.parse().map_err(|_| Error::Parse(format!("bad integer {txt:?}")))
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                self.power(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let mut d = BigInt::one();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    d = self.integer()?;
                    if d == BigInt::from(0) {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                }
                Ok(Poly::constant(self.vars, Q::new(n, d)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let i = self.vars.index_of(name).ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                let v = Poly::monomial(self.vars, Monomial::var(self.vars.len(), i), Q::one());
                self.power(v)
            }
            other => Err(Error::Parse(format!("unexpected {:?} at offset {}", other.map(|c| c as char), self.pos))),
        }
    }

    fn power(&mut self, base: Poly) -> Result<Poly> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }
}
