//! Text form of polynomials: `c1*m1 + c2*m2 + ...` with monomials written as
//! `x3^2*z1`. Terms print in decreasing graded-lex order with factors in
//! variable-id order, so `print(parse(print(p))) == print(p)`.

use std::fmt;

use super::field::FieldElement;
use super::poly::{Monomial, SparsePoly};
use super::ring::PolyRing;
use crate::error::{Error, Result};

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let ring = self.ring();
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let (neg, body) = c.signed_parts();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = body == "1";
            if m.is_one() {
                f.write_str(&body)?;
                continue;
            }
            if !unit {
                write!(f, "{body}*")?;
            }
            write_monomial(f, ring, m)?;
        }
        Ok(())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, ring: &PolyRing, m: &Monomial) -> fmt::Result {
    for (k, &(v, e)) in m.factors().iter().enumerate() {
        if k > 0 {
            f.write_str("*")?;
        }
        f.write_str(&ring.name(v))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Renders a monomial on its own (`1` for the empty monomial).
pub fn monomial_to_string(ring: &PolyRing, m: &Monomial) -> String {
    struct D<'a>(&'a PolyRing, &'a Monomial);
    impl fmt::Display for D<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.1.is_one() {
                return f.write_str("1");
            }
            write_monomial(f, self.0, self.1)
        }
    }
    D(ring, m).to_string()
}

/// Parses a polynomial, registering unseen variable names in `ring`.
///
/// Accepted grammar: signed sums of products of factors, where a factor is an
/// integer, a fraction `a/b`, or an identifier with optional `^k`.
pub fn parse_poly(ring: &PolyRing, text: &str) -> Result<SparsePoly> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        ring,
    };
    let out = p.sum()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    ring: &'a PolyRing,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at byte {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<SparsePoly> {
        let mut acc = SparsePoly::zero(self.ring);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                None => break,
                Some(_) => return Err(self.err("expected `+` or `-`")),
            };
            first = false;
            let t = self.product()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            if self.peek().is_none() {
                break;
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<SparsePoly> {
        let mut coeff = self.ring.one();
        let mut pairs = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff = &coeff * &self.number()?,
                Some(b'(') => return Err(self.err("parentheses are not supported")),
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let v = self.ident();
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        self.digits()?
                            .parse::<u32>()
                            .map_err(|_| self.err("bad exponent"))?
                    } else {
                        1
                    };
                    pairs.push((self.ring.var(&v), e));
                }
                _ => return Err(self.err("expected a factor")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(SparsePoly::term(
            self.ring,
            coeff,
            Monomial::from_pairs(pairs),
        ))
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<FieldElement> {
        let mut lit = self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            lit.push('/');
            lit.push_str(&self.digits()?);
        }
        self.ring.field().parse_element(&lit)
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }
}
