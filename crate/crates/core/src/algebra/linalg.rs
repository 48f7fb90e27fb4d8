//! Exact sparse Gaussian elimination and span membership for polynomial vectors.

use std::collections::{BTreeSet, HashMap};

use super::field::{Field, FieldElement};
use super::poly::{Monomial, SparsePoly};
use crate::error::{Error, Result};

/// Sparse vector with strictly increasing column indices and nonzero entries.
pub type SparseVec = Vec<(u32, FieldElement)>;
type Combo = Vec<(usize, FieldElement)>;

/// `a + c * b` over sorted sparse vectors.
fn axpy<K: Ord + Copy>(
    a: &[(K, FieldElement)],
    c: &FieldElement,
    b: &[(K, FieldElement)],
) -> Vec<(K, FieldElement)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let s = &a[i].1 + &(c * &b[j].1);
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental semi-echelon basis: every stored vector has a distinct leading
/// column and is normalised to 1 there. Optionally tracks, for every stored
/// vector, its expression in terms of the inserted inputs.
pub struct SpanBasis {
    field: Field,
    pivots: HashMap<u32, (SparseVec, Combo)>,
    track: bool,
}

impl SpanBasis {
    pub fn new(field: Field, track: bool) -> SpanBasis {
        SpanBasis {
            field,
            pivots: HashMap::new(),
            track,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` until its leading column has no pivot. Returns the
    /// remainder and (when tracking) the multipliers used.
    fn reduce(&self, mut v: SparseVec, mut combo: Combo) -> (SparseVec, Combo) {
        while let Some((lead, c)) = v.first().cloned() {
            let Some((b, bc)) = self.pivots.get(&lead) else {
                break;
            };
            let m = -&c;
            v = axpy(&v, &m, b);
            if self.track {
                combo = axpy(&combo, &m, bc);
            }
        }
        (v, combo)
    }

    /// Adds input number `id`; returns whether it enlarged the span.
    pub fn insert(&mut self, id: usize, v: SparseVec) -> bool {
        let combo = if self.track {
            vec![(id, self.field.one())]
        } else {
            Vec::new()
        };
        let (r, combo) = self.reduce(v, combo);
        let Some((lead, c)) = r.first().cloned() else {
            return false;
        };
        let inv = c.inv().expect("nonzero leading entry");
        let r: SparseVec = r.into_iter().map(|(k, a)| (k, &a * &inv)).collect();
        let combo: Combo = combo.into_iter().map(|(k, a)| (k, &a * &inv)).collect();
        self.pivots.insert(lead, (r, combo));
        true
    }

    /// The stored basis vectors, ordered by leading column.
    pub fn vectors(&self) -> Vec<SparseVec> {
        let mut keys: Vec<&u32> = self.pivots.keys().collect();
        keys.sort();
        keys.into_iter().map(|k| self.pivots[k].0.clone()).collect()
    }

    /// Some(multipliers over inputs) if `target` lies in the span. Without
    /// tracking the returned list is empty.
    pub fn solve(&self, target: SparseVec) -> Option<Vec<(usize, FieldElement)>> {
        let mut v = target;
        let mut out: Combo = Vec::new();
        while let Some((lead, c)) = v.first().cloned() {
            let (b, bc) = self.pivots.get(&lead)?;
            v = axpy(&v, &-&c, b);
            if self.track {
                out = axpy(&out, &c, bc);
            }
        }
        Some(out)
    }
}

/// Assigns column indices to monomials so that index order is decreasing
/// graded-lex order (index 0 is the largest monomial).
pub struct MonomialIndex {
    index: HashMap<Monomial, u32>,
}

impl MonomialIndex {
    pub fn new<'a, I: IntoIterator<Item = &'a Monomial>>(monomials: I) -> MonomialIndex {
        let set: BTreeSet<&Monomial> = monomials.into_iter().collect();
        let index = set
            .into_iter()
            .rev()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        MonomialIndex { index }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Sparse vector of `p`; `None` if `p` has a monomial outside the index.
    pub fn vector(&self, p: &SparsePoly) -> Option<SparseVec> {
        let mut v: SparseVec = Vec::with_capacity(p.sparsity());
        for (m, c) in p.terms() {
            v.push((*self.index.get(m)?, c.clone()));
        }
        v.sort_by_key(|(k, _)| *k);
        Some(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanResult {
    pub inside: bool,
    /// One multiplier per input vector, present when `inside`.
    pub combination: Option<Vec<FieldElement>>,
}

/// Decides whether `target` is an F-linear combination of `vectors`, with an
/// exact witness when it is.
pub fn span_membership(vectors: &[SparsePoly], target: &SparsePoly) -> Result<SpanResult> {
    span_membership_impl(vectors, target, true)
}

/// Membership only, without witness bookkeeping.
pub fn in_span(vectors: &[SparsePoly], target: &SparsePoly) -> Result<bool> {
    Ok(span_membership_impl(vectors, target, false)?.inside)
}

fn span_membership_impl(
    vectors: &[SparsePoly],
    target: &SparsePoly,
    track: bool,
) -> Result<SpanResult> {
    for v in vectors {
        if v.ring() != target.ring() {
            return Err(Error::RingMismatch);
        }
    }
    let field = target.field();
    let idx = MonomialIndex::new(
        vectors
            .iter()
            .chain(std::iter::once(target))
            .flat_map(|p| p.terms().map(|(m, _)| m)),
    );
    let mut basis = SpanBasis::new(field, track);
    for (i, v) in vectors.iter().enumerate() {
        basis.insert(i, idx.vector(v).expect("indexed"));
    }
    match basis.solve(idx.vector(target).expect("indexed")) {
        None => Ok(SpanResult {
            inside: false,
            combination: None,
        }),
        Some(sparse) => {
            if !track {
                return Ok(SpanResult {
                    inside: true,
                    combination: None,
                });
            }
            let mut comb = vec![field.zero(); vectors.len()];
            for (k, c) in sparse {
                comb[k] = c;
            }
            Ok(SpanResult {
                inside: true,
                combination: Some(comb),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, PolyRing};

    fn check_witness(vs: &[SparsePoly], t: &SparsePoly, comb: &[FieldElement]) {
        let mut acc = SparsePoly::zero(t.ring());
        for (v, c) in vs.iter().zip(comb) {
            acc = &acc + &v.scale(c);
        }
        assert_eq!(&acc, t);
    }

    #[test]
    fn complementary_literals_span_one() {
        let r = PolyRing::new(Field::default());
        let vs = vec![
            parse_poly(&r, "x1").unwrap(),
            parse_poly(&r, "1 - x1").unwrap(),
        ];
        let one = SparsePoly::one(&r);
        let res = span_membership(&vs, &one).unwrap();
        assert!(res.inside);
        let comb = res.combination.unwrap();
        assert_eq!(comb, vec![r.one(), r.one()]);
        check_witness(&vs, &one, &comb);
    }

    #[test]
    fn single_vector_misses_one() {
        let r = PolyRing::new(Field::default());
        let vs = vec![parse_poly(&r, "1 - x1").unwrap()];
        let res = span_membership(&vs, &SparsePoly::one(&r)).unwrap();
        assert!(!res.inside);
        assert!(res.combination.is_none());
    }

    #[test]
    fn empty_family_spans_zero_only() {
        let r = PolyRing::new(Field::default());
        let res = span_membership(&[], &SparsePoly::zero(&r)).unwrap();
        assert!(res.inside);
        assert_eq!(res.combination, Some(vec![]));
        assert!(!in_span(&[], &SparsePoly::one(&r)).unwrap());
    }

    #[test]
    fn dependent_inputs_still_give_witness() {
        let r = PolyRing::new(Field::Rational);
        let vs: Vec<_> = ["x + y", "2*x + 2*y", "x - y", "y*z"]
            .iter()
            .map(|s| parse_poly(&r, s).unwrap())
            .collect();
        let t = parse_poly(&r, "3*x + y - 5*y*z").unwrap();
        let res = span_membership(&vs, &t).unwrap();
        assert!(res.inside);
        check_witness(&vs, &t, &res.combination.unwrap());
    }
}
