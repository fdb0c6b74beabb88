//! Reader for the expression syntax used in table files and reports.
//!
//! Grammar: sums and differences of products and quotients of factors; a factor is
//! a signed atom with an optional `^` exponent. Atoms are integers, `q`, `r2` (√2),
//! factor names such as `phi8'` (replaced by their polynomial), unknown names, and
//! parenthesized expressions. Divisors must be free of unknowns
//! and either constant or a single power of `q`.

use num_bigint::BigInt;

use super::mpoly::{MPoly, SymPoly};
use super::qpoly::{LPoly, QPoly};
use super::qs2::QS2;
use super::Factor;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            input: self.src.to_string(),
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<SymPoly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SymPoly> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = self.divide(acc, d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn divide(&self, num: SymPoly, den: SymPoly) -> Result<SymPoly> {
        let Some(d) = den.as_constant() else {
            return self.err("divisor contains unknowns");
        };
        let Some((c, k)) = d.as_monomial() else {
            return self.err("divisor must be a constant or a power of q");
        };
        let inv = c.inv()?;
        Ok(num.map_coeffs(|x| x.shift(-k).scale(&inv)))
    }

    fn factor(&mut self) -> Result<SymPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                return Ok(self.factor()?.neg());
            }
            Some(b'+') => {
                self.pos += 1;
                return self.factor();
            }
            _ => {}
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.uint()?;
            if neg {
                let Some(c) = base.as_constant() else {
                    return self.err("negative exponent on an unknown");
                };
                let Some((coef, k)) = c.as_monomial() else {
                    return self.err("negative exponent needs a monomial base");
                };
                let inv = coef.pow(-(e as i32))?;
                return Ok(MPoly::constant(LPoly::monomial(inv, -k * e as i32)));
            }
            let mut out = SymPoly::one();
            for _ in 0..e {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected exponent");
        }
        self.src[start..self.pos]
            .parse()
            .or_else(|_| self.err("exponent too large"))
    }

    fn atom(&mut self) -> Result<SymPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = self.src[start..self.pos].parse().expect("digits");
                Ok(MPoly::constant(LPoly::constant(QS2::from_bigint(n))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric()
                        || matches!(self.bytes[self.pos], b'_' | b'\'' | b'~'))
                {
                    self.pos += 1;
                }
                Ok(match &self.src[start..self.pos] {
                    "q" => MPoly::constant(LPoly::monomial(QS2::from_int(1), 1)),
                    "r2" => MPoly::constant(LPoly::constant(QS2::sqrt2())),
                    name => match Factor::from_name(name) {
                        Some(f) => MPoly::constant(LPoly::from(f.poly())),
                        None => MPoly::var(name),
                    },
                })
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression in `q`, `r2` and unknowns.
pub fn parse_sym(src: &str) -> Result<SymPoly> {
    let mut p = Parser {
        src,
        bytes: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a polynomial in `q` with no unknowns and no negative powers.
pub fn parse_qpoly(src: &str) -> Result<QPoly> {
    let e = parse_sym(src)?;
    let err = |msg: &str| Error::Parse {
        input: src.to_string(),
        pos: 0,
        msg: msg.to_string(),
    };
    let c = e
        .as_constant()
        .ok_or_else(|| err("unknowns are not allowed here"))?;
    c.to_qpoly()
        .ok_or_else(|| err("negative powers of q are not allowed here"))
}

impl std::str::FromStr for QPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_qpoly(s)
    }
}
