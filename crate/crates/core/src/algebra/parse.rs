//! Reader for the plain-text polynomial grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary | unary)*      juxtaposition multiplies
//! unary  := '-' unary | atom ['^' INT]
//! atom   := NUMBER | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers: `a`, `ad` (mode 0), `aJ`, `adJ` (mode J), `w`, `wJ` (base
//! frequencies), `gN` (coupling `g_N`); anything else is a named symbol.
//! Operator strings need not be normal ordered (`ad a ad` is accepted).
//! Divisors must be scalars built from rationals and frequency symbols or an
//! integer combination of base frequencies such as `(w0-w1)`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::coupling::{CouplingPolynomial, Symbol};
use super::monomial::ModeMonomial;
use super::operator::OperatorPolynomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            out.push((start, Tok::Num(parse_decimal(&src[start..i], start)?)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

fn parse_decimal(s: &str, pos: usize) -> Result<BigRational> {
    let bad = || Error::Parse {
        pos,
        msg: format!("malformed number `{s}`"),
    };
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(numer, denom))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<OperatorPolynomial> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc += &self.term()?;
            } else if self.eat('-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<OperatorPolynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                let inv = invert(&d).ok_or(Error::Parse {
                    pos: at,
                    msg: "divisor must be a rational, a frequency monomial or a frequency combination".into(),
                })?;
                acc = acc.scale_by(&inv);
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))) {
                acc = &acc * &self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<OperatorPolynomial> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            let exp = match self.peek() {
                Some(Tok::Num(n)) if n.is_integer() => n.to_integer(),
                _ => return self.err("expected a nonnegative integer exponent"),
            };
            let exp: u32 = match u32::try_from(&exp) {
                Ok(e) if e <= 64 => e,
                _ => return self.err("exponent out of range"),
            };
            self.pos += 1;
            Ok((0..exp).fold(OperatorPolynomial::identity(), |acc, _| &acc * &base))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<OperatorPolynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(OperatorPolynomial::scalar(CouplingPolynomial::constant(n)))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                Ok(identifier(&id))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn suffix_index(id: &str, prefix: &str) -> Option<u32> {
    let rest = id.strip_prefix(prefix)?;
    if rest.is_empty() {
        return Some(0);
    }
    if rest.bytes().all(|b| b.is_ascii_digit()) {
        rest.parse().ok()
    } else {
        None
    }
}

fn identifier(id: &str) -> OperatorPolynomial {
    if let Some(j) = suffix_index(id, "ad").filter(|&j| j <= u16::MAX as u32) {
        return OperatorPolynomial::creation(j as u16);
    }
    if let Some(j) = suffix_index(id, "a").filter(|&j| j <= u16::MAX as u32) {
        return OperatorPolynomial::annihilation(j as u16);
    }
    if let Some(b) = suffix_index(id, "w") {
        return OperatorPolynomial::scalar(CouplingPolynomial::frequency(b as usize));
    }
    if let Some(n) = id.strip_prefix('g').filter(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit())) {
        if let Ok(n) = n.parse() {
            return OperatorPolynomial::scalar(CouplingPolynomial::coupling(n));
        }
    }
    OperatorPolynomial::scalar(CouplingPolynomial::symbol(Symbol::named(id)))
}

fn invert(d: &OperatorPolynomial) -> Option<CouplingPolynomial> {
    if d.is_zero() || d.terms().any(|(m, _)| !m.is_identity()) {
        return None;
    }
    d.coefficient(&ModeMonomial::identity()).reciprocal()
}

/// Parses an operator polynomial; the result is normal ordered.
pub fn parse_operator(src: &str) -> Result<OperatorPolynomial> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a scalar coupling expression (no ladder operators).
pub fn parse_coupling(src: &str) -> Result<CouplingPolynomial> {
    let op = parse_operator(src)?;
    if op.terms().any(|(m, _)| !m.is_identity()) {
        return Err(Error::Parse {
            pos: 0,
            msg: "expected a scalar expression without ladder operators".into(),
        });
    }
    Ok(op.coefficient(&ModeMonomial::identity()))
}

impl FromStr for OperatorPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_operator(s)
    }
}

impl FromStr for CouplingPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_coupling(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_non_normal_ordered_strings() {
        let p = parse_operator("ad a ad").unwrap();
        assert_eq!(p, parse_operator("ad^2 a + ad").unwrap());
        assert_eq!(parse_operator("a ad - ad a").unwrap(), OperatorPolynomial::identity());
    }

    #[test]
    fn round_trips_display() {
        let p = parse_operator("g3/w*(1/3*ad^3 + 3*ad a ad) - 30*g3^2/w * ad^2 a^2 + 7").unwrap();
        assert_eq!(parse_operator(&p.to_string()).unwrap(), p);
        let q = parse_operator("g/(w0-w1) * ad a1 + 2.5*lambda").unwrap();
        assert_eq!(parse_operator(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn rejects_bad_divisors_and_tokens() {
        assert!(matches!(parse_operator("1/g3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("ad/a"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("ad $"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_operator("(ad"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn decimal_numbers_are_exact() {
        assert_eq!(parse_coupling("0.25").unwrap().as_constant().unwrap(), BigRational::new(1.into(), 4.into()));
        assert!(parse_coupling("ad").is_err());
    }
}
