//! Exact scalar arithmetic: prime fields `F_p` and the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default prime modulus, the Mersenne prime 2^31 - 1.
pub const DEFAULT_MODULUS: u64 = (1 << 31) - 1;

/// Largest modulus accepted; keeps additions inside `u64`.
const MAX_MODULUS: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u64),
    Rational,
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(DEFAULT_MODULUS)
    }
}

impl Field {
    /// Prime field with a checked modulus.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    /// Characteristic; 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_u64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> FieldElement {
        match *self {
            Field::Prime(p) => FieldElement::Prime {
                value: v % p,
                modulus: p,
            },
            Field::Rational => FieldElement::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match *self {
            Field::Prime(p) => {
                let r = (v as i128).rem_euclid(p as i128) as u64;
                FieldElement::Prime {
                    value: r,
                    modulus: p,
                }
            }
            Field::Rational => FieldElement::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match *self {
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                FieldElement::Prime {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
            Field::Rational => FieldElement::Rational(BigRational::from_integer(v.clone())),
        }
    }

    /// `num / den` as a field element.
    pub fn fraction(&self, num: i64, den: i64) -> Result<FieldElement> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or(Error::DivisionByZero)?;
        Ok(&self.from_i64(num) * &inv)
    }

    /// Parses an integer or `a/b` literal (optionally signed).
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let n = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
        let e = self.from_bigint(&n);
        match den {
            None => Ok(e),
            Some(d) => {
                let d =
                    BigInt::from_str(d).map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
                let inv = self.from_bigint(&d).inv().ok_or(Error::DivisionByZero)?;
                Ok(&e * &inv)
            }
        }
    }

    /// Text tag used by every file format: `prime:<p>` or `rational`.
    pub fn tag(&self) -> String {
        match self {
            Field::Prime(p) => format!("prime:{p}"),
            Field::Rational => "rational".to_string(),
        }
    }

    pub fn parse_tag(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "rational" || s == "Q" {
            return Ok(Field::Rational);
        }
        let digits = s.strip_prefix("prime:").unwrap_or(s);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidField(format!("unrecognised field `{s}`")))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// An exact element of a [`Field`]. Prime residues are kept in `[0, p)`,
/// rationals in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Prime { value: u64, modulus: u64 },
    Rational(BigRational),
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Prime { modulus, .. } => Field::Prime(*modulus),
            FieldElement::Rational(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Prime { value, .. } => *value == 0,
            FieldElement::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Prime { value, .. } => *value == 1,
            FieldElement::Rational(r) => r.is_one(),
        }
    }

    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElement::Prime { value, modulus } => FieldElement::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
        })
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Signed integer view `(numerator, denominator)` used by the printer.
    /// Prime residues above `p/2` print as negatives.
    pub(crate) fn signed_parts(&self) -> (bool, String) {
        match self {
            FieldElement::Prime { value, modulus } => {
                if *value > modulus / 2 {
                    (true, (modulus - value).to_string())
                } else {
                    (false, value.to_string())
                }
            }
            FieldElement::Rational(r) => {
                let neg = r.is_negative();
                let a = r.abs();
                if a.is_integer() {
                    (neg, a.numer().to_string())
                } else {
                    (neg, format!("{}/{}", a.numer(), a.denom()))
                }
            }
        }
    }

    fn assert_same(&self, other: &FieldElement) {
        debug_assert_eq!(self.field(), other.field(), "mixed-field arithmetic");
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, body) = self.signed_parts();
        if neg {
            write!(f, "-{body}")
        } else {
            f.write_str(&body)
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.assert_same(rhs);
        match (self, rhs) {
            (FieldElement::Prime { value: a, modulus }, FieldElement::Prime { value: b, .. }) => {
                let s = a + b;
                FieldElement::Prime {
                    value: if s >= *modulus { s - modulus } else { s },
                    modulus: *modulus,
                }
            }
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            _ => panic!("mixed-field arithmetic"),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.assert_same(rhs);
        match (self, rhs) {
            (FieldElement::Prime { value: a, modulus }, FieldElement::Prime { value: b, .. }) => {
                FieldElement::Prime {
                    value: if a >= b { a - b } else { a + modulus - b },
                    modulus: *modulus,
                }
            }
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a - b),
            _ => panic!("mixed-field arithmetic"),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.assert_same(rhs);
        match (self, rhs) {
            (FieldElement::Prime { value: a, modulus }, FieldElement::Prime { value: b, .. }) => {
                FieldElement::Prime {
                    value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            _ => panic!("mixed-field arithmetic"),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Prime { value, modulus } => FieldElement::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            FieldElement::Rational(r) => FieldElement::Rational(-r),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_arithmetic_wraps() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_u64(2));
        assert_eq!(&b - &a, f.from_u64(6));
        assert_eq!(&a * &b, f.from_u64(6));
        assert_eq!(&a * &a.inv().unwrap(), f.one());
        assert_eq!(-&f.one(), f.from_u64(6));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(15).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(DEFAULT_MODULUS).is_ok());
        assert!(Field::prime(1_000_000_007).is_ok());
    }

    #[test]
    fn rational_is_normalised() {
        let f = Field::Rational;
        let x = f.fraction(6, -4).unwrap();
        assert_eq!(x.to_string(), "-3/2");
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn parse_tag_round_trip() {
        for f in [
            Field::Rational,
            Field::default(),
            Field::prime(101).unwrap(),
        ] {
            assert_eq!(Field::parse_tag(&f.tag()).unwrap(), f);
        }
        assert_eq!(Field::default().characteristic(), DEFAULT_MODULUS);
    }

    #[test]
    fn parse_fractions_in_prime_field() {
        let f = Field::prime(11).unwrap();
        let half = f.parse_element("1/2").unwrap();
        assert_eq!(&half * &f.from_u64(2), f.one());
        assert_eq!(f.parse_element("-3").unwrap(), f.from_u64(8));
    }
}
