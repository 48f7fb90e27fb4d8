//! Dense univariate polynomials used as roABP edge labels.

use crate::algebra::{Field, FieldElement, Monomial, PolyRing, SparsePoly, Var};
use crate::error::{Error, Result};

/// Coefficients lowest degree first, without trailing zeros. The empty
/// vector is the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<FieldElement>);

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly(Vec::new())
    }

    pub fn constant(c: FieldElement) -> UniPoly {
        UniPoly(vec![c]).trimmed()
    }

    /// `a + b*v`
    pub fn linear(a: FieldElement, b: FieldElement) -> UniPoly {
        UniPoly(vec![a, b]).trimmed()
    }

    /// The label `v` itself.
    pub fn x(field: Field) -> UniPoly {
        UniPoly(vec![field.zero(), field.one()])
    }

    /// `c * v^k`
    pub fn monomial(c: FieldElement, k: usize, field: Field) -> UniPoly {
        let mut v = vec![field.zero(); k];
        v.push(c);
        UniPoly(v).trimmed()
    }

    pub fn from_coeffs(v: Vec<FieldElement>) -> UniPoly {
        UniPoly(v).trimmed()
    }

    fn trimmed(mut self) -> UniPoly {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn constant_term(&self, field: Field) -> FieldElement {
        self.0.first().cloned().unwrap_or_else(|| field.zero())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.0.get(i), other.0.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UniPoly(out).trimmed()
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let field = self.0[0].field();
        let mut out = vec![field.zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly(out).trimmed()
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        UniPoly(self.0.iter().map(|a| a * c).collect()).trimmed()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = x.field().zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `f(a + b*v)`
    pub fn compose_affine(&self, a: &FieldElement, b: &FieldElement) -> UniPoly {
        let lin = UniPoly::linear(a.clone(), b.clone());
        let mut acc = UniPoly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(&lin).add(&UniPoly::constant(c.clone()));
        }
        acc
    }

    /// Splits `f = r + q*(v^2 - v)` with `deg r <= 1`.
    pub fn divide_boolean(&self) -> (UniPoly, UniPoly) {
        if self.0.len() <= 2 {
            return (self.clone(), UniPoly::zero());
        }
        let field = self.0[0].field();
        // Synthetic division by v^2 - v: top-down, v^k = v^(k-1) + v^(k-2)(v^2 - v).
        let mut rem = self.0.clone();
        let mut quot = vec![field.zero(); self.0.len() - 2];
        for k in (2..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            quot[k - 2] = &quot[k - 2] + &c;
            rem[k - 1] = &rem[k - 1] + &c;
            rem[k] = field.zero();
        }
        rem.truncate(2);
        (UniPoly(rem).trimmed(), UniPoly(quot).trimmed())
    }

    pub fn to_sparse(&self, ring: &PolyRing, v: Var) -> SparsePoly {
        SparsePoly::from_terms(
            ring,
            self.0
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::pow(v, k as u32), c.clone())),
        )
    }

    /// Reads a polynomial that mentions at most the variable `v`.
    pub fn from_sparse(p: &SparsePoly, v: Var) -> Result<UniPoly> {
        let field = p.field();
        let mut out = vec![field.zero(); p.degree_in(v) as usize + 1];
        for (m, c) in p.terms() {
            let (rest, e) = m.split_off(v);
            if !rest.is_one() {
                return Err(Error::MalformedProgram(format!(
                    "label `{p}` is not univariate in {}",
                    p.ring().name(v)
                )));
            }
            out[e as usize] = c.clone();
        }
        Ok(UniPoly(out).trimmed())
    }
}
