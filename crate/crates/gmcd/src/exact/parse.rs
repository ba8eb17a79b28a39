//! Recursive-descent parser for the canonical text form of polynomials and
//! rational functions. The grammar is the one the `Display` impls emit, so
//! rendering and re-parsing round-trips to the identical canonical form.

use super::mpoly::MPoly;
use super::ratfunc::RatFunc;
use super::ring::Ring;
use super::{Error, Rat};
use num_bigint::BigInt;

pub fn parse_ratfunc(ring: &Ring, text: &str) -> Result<RatFunc, Error> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, ring: ring.clone() };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!("trailing input at byte {} in {text:?}", p.pos)));
    }
    Ok(v)
}

/// Parse text that must denote a polynomial (no surviving denominator).
pub fn parse_mpoly(ring: &Ring, text: &str) -> Result<MPoly, Error> {
    let v = parse_ratfunc(ring, text)?;
    v.as_mpoly()
        .cloned()
        .ok_or_else(|| Error::Parse(format!("not a polynomial: {text:?}")))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    ring: Ring,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<RatFunc, Error> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, Error> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.bump();
                    acc = acc.div(&self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, Error> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(-&self.unary()?);
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let mut neg = false;
            if self.peek() == Some('-') {
                self.bump();
                neg = true;
            }
            let e: i32 = i32::try_from(self.integer()?)
                .map_err(|_| Error::Parse("exponent out of range".into()))?;
            return base.pow_i(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, Error> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let v = self.expr()?;
                if self.bump() != Some(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFunc::constant(&self.ring, Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&ch) = self.chars.get(self.pos) {
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        name.push(ch);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.ring.var_index(&name)?;
                Ok(RatFunc::var(&self.ring, &name))
            }
            other => Err(Error::Parse(format!("unexpected input: {other:?}"))),
        }
    }

    fn integer(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse("expected an integer".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}")))
    }
}
