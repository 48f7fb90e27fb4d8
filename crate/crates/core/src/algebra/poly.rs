//! Sparse multivariate polynomials with canonical term maps.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, FieldElement};
use super::ring::{PolyRing, Var};
use crate::error::{Error, Result};

/// A monomial as `(variable, exponent)` pairs sorted by variable id with no
/// zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn pow(v: Var, e: u32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Monomial {
        let mut m: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |(w, _)| *w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// The monomial with `v` removed, and `v`'s exponent.
    pub fn split_off(&self, v: Var) -> (Monomial, u32) {
        let e = self.exponent(v);
        (
            Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect()),
            e,
        )
    }

    /// Restriction to variables satisfying `keep`.
    pub fn filter<F: Fn(Var) -> bool>(&self, keep: F) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(v, _)| keep(*v)).collect())
    }

    /// Replaces every exponent above one with one.
    pub fn multilinear_in<F: Fn(Var) -> bool>(&self, boolean: F) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|&(v, e)| if boolean(v) { (v, 1) } else { (v, e) })
                .collect(),
        )
    }
}

/// Graded lexicographic order over variable ids: total degree first, then the
/// exponent of the smallest variable id decides.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a.0 != b.0 {
                return if a.0 < b.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            if a.1 != b.1 {
                return a.1.cmp(&b.1);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An exact polynomial over a [`PolyRing`]. No zero coefficients are stored,
/// so equal polynomials have identical term maps.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    ring: PolyRing,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl SparsePoly {
    pub fn zero(ring: &PolyRing) -> SparsePoly {
        SparsePoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &PolyRing, c: FieldElement) -> SparsePoly {
        SparsePoly::term(ring, c, Monomial::one())
    }

    pub fn one(ring: &PolyRing) -> SparsePoly {
        SparsePoly::constant(ring, ring.one())
    }

    pub fn from_i64(ring: &PolyRing, c: i64) -> SparsePoly {
        SparsePoly::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &PolyRing, v: Var) -> SparsePoly {
        SparsePoly::term(ring, ring.one(), Monomial::var(v))
    }

    pub fn term(ring: &PolyRing, c: FieldElement, m: Monomial) -> SparsePoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, FieldElement)>>(
        ring: &PolyRing,
        it: I,
    ) -> SparsePoly {
        let mut p = SparsePoly::zero(ring);
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    /// `1 - v`
    pub fn one_minus(ring: &PolyRing, v: Var) -> SparsePoly {
        &SparsePoly::one(ring) - &SparsePoly::var(ring, v)
    }

    /// Boolean axiom `v^2 - v`.
    pub fn boolean_axiom(ring: &PolyRing, v: Var) -> SparsePoly {
        SparsePoly::from_terms(
            ring,
            [
                (Monomial::pow(v, 2), ring.one()),
                (Monomial::var(v), -&ring.one()),
            ],
        )
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, FieldElement> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Constant term.
    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&Monomial::one())
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Number of monomials.
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_ring(&self, other: &SparsePoly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ring(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ring(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ring(other)?;
        Ok(self * other)
    }

    /// `c * self`; fails if `c` lives in another field.
    pub fn checked_scale(&self, c: &FieldElement) -> Result<SparsePoly> {
        if c.field() != self.field() {
            return Err(Error::FieldMismatch(c.field().tag(), self.field().tag()));
        }
        Ok(self.scale(c))
    }

    pub fn scale(&self, c: &FieldElement) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(&self.ring);
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &FieldElement) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(&self.ring);
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Simultaneous substitution; variables absent from `map` survive.
    pub fn substitute(&self, map: &HashMap<Var, SparsePoly>) -> SparsePoly {
        let mut powers: HashMap<(Var, u32), SparsePoly> = HashMap::new();
        let mut out = SparsePoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = SparsePoly::one(&self.ring);
            for &(v, e) in m.factors() {
                match map.get(&v) {
                    Some(q) => {
                        let pw = powers.entry((v, e)).or_insert_with(|| q.pow(e));
                        acc = &acc * &*pw;
                    }
                    None => kept.push((v, e)),
                }
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            let rest = Monomial::from_pairs(kept);
            for (n, a) in acc.terms {
                out.add_term(n.mul(&rest), &(&a * c));
            }
        }
        out
    }

    /// Substitutes field constants for some variables.
    pub fn substitute_constants(&self, values: &HashMap<Var, FieldElement>) -> SparsePoly {
        let mut out = SparsePoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Vec::new();
            for &(v, e) in m.factors() {
                match values.get(&v) {
                    Some(a) => coeff = &coeff * &a.pow(e as u64),
                    None => kept.push((v, e)),
                }
            }
            out.add_term(Monomial(kept), &coeff);
        }
        out
    }

    /// Evaluates at a total point given by `value`; panics if a variable is missing.
    pub fn eval<F: Fn(Var) -> FieldElement>(&self, value: F) -> FieldElement {
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                t = &t * &value(v).pow(e as u64);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Renames variables; the map must be injective on this polynomial's support
    /// for the result to be a faithful copy.
    pub fn rename(&self, map: &HashMap<Var, Var>) -> SparsePoly {
        SparsePoly::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| {
                (
                    Monomial::from_pairs(
                        m.factors()
                            .iter()
                            .map(|&(v, e)| (*map.get(&v).unwrap_or(&v), e)),
                    ),
                    c.clone(),
                )
            }),
        )
    }

    /// The unique polynomial agreeing with `self` on the Boolean cube of the
    /// variables selected by `boolean`, multilinear in those variables.
    pub fn multilinearize<F: Fn(Var) -> bool>(&self, boolean: F) -> SparsePoly {
        SparsePoly::from_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, c)| (m.multilinear_in(&boolean), c.clone())),
        )
    }

    /// Writes `self = rest + q * (v^2 - v)` with `rest` of degree at most one in `v`.
    pub fn divide_boolean(&self, v: Var) -> (SparsePoly, SparsePoly) {
        let mut rest = SparsePoly::zero(&self.ring);
        let mut q = SparsePoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let (base, e) = m.split_off(v);
            if e <= 1 {
                rest.add_term(m.clone(), c);
                continue;
            }
            // v^e - v = (v^2 - v)(v^(e-2) + ... + 1)
            rest.add_term(base.mul(&Monomial::var(v)), c);
            for k in 0..=(e - 2) {
                q.add_term(base.mul(&Monomial::pow(v, k)), c);
            }
        }
        (rest, q)
    }

    /// The coefficient polynomial of `v^k`, with `v` removed.
    pub fn coefficient_of_power(&self, v: Var, k: u32) -> SparsePoly {
        let mut out = SparsePoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let (base, e) = m.split_off(v);
            if e == k {
                out.add_term(base, c);
            }
        }
        out
    }

    /// Leading (largest in graded-lex) term.
    pub fn leading(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }
}

/// Arithmetic operator selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Neg,
    Scale,
}

pub enum Operand<'a> {
    Poly(&'a SparsePoly),
    Scalar(&'a FieldElement),
}

/// Dispatching form of the polynomial operations with explicit mismatch errors.
pub fn poly_arith(op: PolyOp, a: &SparsePoly, b: Operand<'_>) -> Result<SparsePoly> {
    match (op, b) {
        (PolyOp::Neg, _) => Ok(-a),
        (PolyOp::Scale, Operand::Scalar(c)) => a.checked_scale(c),
        (PolyOp::Scale, Operand::Poly(p)) => {
            if !p.is_constant() {
                return Err(Error::Invalid("scale by a non-constant polynomial".into()));
            }
            a.check_ring(p)?;
            Ok(a.scale(&p.constant_term()))
        }
        (op, Operand::Scalar(c)) => {
            if c.field() != a.field() {
                return Err(Error::FieldMismatch(c.field().tag(), a.field().tag()));
            }
            let p = SparsePoly::constant(a.ring(), c.clone());
            poly_arith(op, a, Operand::Poly(&p))
        }
        (PolyOp::Add, Operand::Poly(p)) => a.checked_add(p),
        (PolyOp::Sub, Operand::Poly(p)) => a.checked_sub(p),
        (PolyOp::Mul, Operand::Poly(p)) => a.checked_mul(p),
    }
}

impl<'a> Add<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &'a SparsePoly) -> SparsePoly {
        assert!(self.ring == rhs.ring, "ring mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &'a SparsePoly) -> SparsePoly {
        assert!(self.ring == rhs.ring, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &'a SparsePoly) -> SparsePoly {
        assert!(self.ring == rhs.ring, "ring mismatch");
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                let prod = a * b;
                let key = m.mul(n);
                match acc.get_mut(&key) {
                    Some(e) => *e = &*e + &prod,
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(Field::default())
    }

    #[test]
    fn cancellation_to_one() {
        let r = ring();
        let x = r.var("x1");
        let p = &SparsePoly::var(&r, x) + &SparsePoly::one_minus(&r, x);
        assert!(p.is_one());
    }

    #[test]
    fn product_of_linear_factors() {
        let r = ring();
        let x = r.var("x1");
        let p = &SparsePoly::one_minus(&r, x) * &SparsePoly::var(&r, x);
        assert_eq!(p.sparsity(), 2);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.coefficient(&Monomial::pow(x, 2)), r.field().from_i64(-1));
        assert_eq!(p.coefficient(&Monomial::var(x)), r.one());
    }

    #[test]
    fn graded_lex_order() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let xy = Monomial::from_pairs([(x, 1), (y, 1)]);
        let x2 = Monomial::pow(x, 2);
        let y2 = Monomial::pow(y, 2);
        let x1 = Monomial::var(x);
        assert!(x2 > xy && xy > y2 && y2 > x1 && x1 > Monomial::one());
    }

    #[test]
    fn substitution_of_boolean_roots() {
        let r = ring();
        let x = r.var("x");
        let p = SparsePoly::boolean_axiom(&r, x);
        for b in [0, 1] {
            let mut m = HashMap::new();
            m.insert(x, SparsePoly::from_i64(&r, b));
            assert!(p.substitute(&m).is_zero());
        }
    }

    #[test]
    fn divide_boolean_recombines() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let p = SparsePoly::from_terms(
            &r,
            [
                (
                    Monomial::from_pairs([(x, 4), (y, 1)]),
                    r.field().from_i64(3),
                ),
                (Monomial::pow(x, 2), r.one()),
                (Monomial::var(y), r.one()),
            ],
        );
        let (rest, q) = p.divide_boolean(x);
        assert!(rest.degree_in(x) <= 1);
        let back = &rest + &(&q * &SparsePoly::boolean_axiom(&r, x));
        assert_eq!(back, p);
        assert_eq!(rest, p.multilinearize(|v| v == x));
    }

    #[test]
    fn poly_arith_rejects_foreign_ring() {
        let a = ring();
        let b = ring();
        let p = SparsePoly::var(&a, a.var("x"));
        let q = SparsePoly::var(&b, b.var("x"));
        assert_eq!(
            poly_arith(PolyOp::Add, &p, Operand::Poly(&q)).unwrap_err(),
            Error::RingMismatch
        );
        let c = Field::Rational.one();
        assert!(matches!(
            poly_arith(PolyOp::Scale, &p, Operand::Scalar(&c)),
            Err(Error::FieldMismatch(..))
        ));
    }
}
