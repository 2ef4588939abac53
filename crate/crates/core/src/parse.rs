//! Polynomial expressions in one variable `x`.
//!
//! ```text
//! expr   = ["+" | "-"] term { ("+" | "-") term } ;
//! term   = power { ["*"] power | "/" uint } ;
//! power  = atom [ "^" uint ] ;
//! atom   = uint | "x" | "(" expr ")" ;
//! uint   = digit { digit } ;
//! ```
//!
//! Juxtaposition multiplies (`2x`, `3(x+1)`). Whitespace is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{IntPoly, RatPoly};
use crate::numfield::{FieldElement, NumberField};
use std::sync::Arc;

const MAX_EXPONENT: u32 = 1024;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at offset {}", self.pos)))
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

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn expr(&mut self) -> Result<RatPoly> {
        let mut acc = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.uint()?;
                    if d.is_zero() {
                        return self.err("division by zero");
                    }
                    acc = acc.scale(&BigRational::new(BigInt::one(), d));
                }
                Some(c) if c.is_ascii_digit() || c == b'x' || c == b'(' => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RatPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            let e: u32 = match u32::try_from(e) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.err("exponent too large"),
            };
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatPoly> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(RatPoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                Ok(RatPoly::constant(BigRational::from_integer(self.uint()?)))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_rat_poly(s: &str) -> Result<RatPoly> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

pub fn parse_int_poly(s: &str) -> Result<IntPoly> {
    parse_rat_poly(s)?
        .to_int()
        .ok_or_else(|| Error::Parse(format!("{s}: coefficients must be integers")))
}

/// An element of K written as a polynomial in the generator `x`.
pub fn parse_element(field: &Arc<NumberField>, s: &str) -> Result<FieldElement> {
    Ok(FieldElement::from_rat_poly(field, &parse_rat_poly(s)?))
}

/// `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Parse(format!("{s}: expected N or A..B"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let a: u32 = s.trim().parse().map_err(|_| bad())?;
            Ok((a, a))
        }
    }
}
