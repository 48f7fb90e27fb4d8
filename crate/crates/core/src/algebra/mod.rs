//! Exact arithmetic substrate: fields, the variable table, sparse polynomials
//! and span membership.

mod field;
mod linalg;
mod poly;
mod ring;
mod text;

pub use field::{Field, FieldElement, DEFAULT_MODULUS};
pub use linalg::{in_span, span_membership, MonomialIndex, SpanBasis, SpanResult, SparseVec};
pub use poly::{poly_arith, Monomial, Operand, PolyOp, SparsePoly};
pub use ring::{PolyRing, Var};
pub use text::{monomial_to_string, parse_poly};
