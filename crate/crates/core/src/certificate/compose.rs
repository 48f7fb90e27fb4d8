//! Composition of derivations.

use super::cert::LinearIpsCertificate;
use crate::error::{Error, Result};
use crate::roabp::Roabp;

/// Substitutes derivations for the axioms of `outer`. `inner[a]` derives
/// axiom `a` of `outer.system` from a common system `B`; the result is a
/// certificate over `B` with coefficient `sum_a outer[a] * inner[a][b]` for
/// every `b`, so its width is at most `sum_a width(outer[a]) * width(inner[a])`.
pub fn compose_derivation(
    outer: &LinearIpsCertificate,
    inner: &[LinearIpsCertificate],
) -> Result<LinearIpsCertificate> {
    if inner.len() != outer.system.len() {
        return Err(Error::Invalid(format!(
            "{} inner derivations for {} outer axioms",
            inner.len(),
            outer.system.len()
        )));
    }
    let Some(first) = inner.first() else {
        return LinearIpsCertificate::new(
            outer.system.clone(),
            outer.order.clone(),
            vec![],
            outer.target.clone(),
        );
    };
    let base = &first.system;
    for (a, d) in inner.iter().enumerate() {
        if d.order != outer.order {
            return Err(Error::OrderMismatch(format!(
                "derivation of axiom {a} uses a different order"
            )));
        }
        if d.system != *base {
            return Err(Error::Invalid(format!(
                "derivation of axiom {a} starts from a different system"
            )));
        }
        if d.target != outer.system.entries()[a].poly {
            return Err(Error::Invalid(format!(
                "derivation {a} does not derive outer axiom {a}"
            )));
        }
    }
    let ring = outer.ring();
    let mut coefficients = vec![Roabp::zero(ring, &outer.order); base.len()];
    for (a, d) in inner.iter().enumerate() {
        let oc = &outer.coefficients[a];
        if oc.is_structurally_zero() {
            continue;
        }
        for (b, ic) in d.coefficients.iter().enumerate() {
            if ic.is_structurally_zero() {
                continue;
            }
            let prod = if ic.width() == 1 && ic.is_constant_one() {
                oc.clone()
            } else {
                oc.mul(ic)?
            };
            coefficients[b] = coefficients[b].add(&prod)?;
        }
    }
    LinearIpsCertificate::new(
        base.clone(),
        outer.order.clone(),
        coefficients,
        outer.target.clone(),
    )
}

/// The trivial derivation of axiom `i` from its own system.
pub fn identity_derivation(
    system: &crate::formulas::PolySystem,
    order: &[crate::algebra::Var],
    i: usize,
) -> Result<LinearIpsCertificate> {
    let ring = system.ring();
    let coefficients = (0..system.len())
        .map(|j| {
            if j == i {
                Roabp::one(ring, order)
            } else {
                Roabp::zero(ring, order)
            }
        })
        .collect();
    LinearIpsCertificate::new(
        system.clone(),
        order.to_vec(),
        coefficients,
        system.entries()[i].poly.clone(),
    )
}
