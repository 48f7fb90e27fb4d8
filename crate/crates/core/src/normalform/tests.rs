use std::collections::HashMap;

use proptest::prelude::*;

use super::*;
use crate::algebra::{parse_poly, Field, PolyRing};
use crate::certificate::{refute_by_search, VerifyMode};
use crate::formulas::{split_system, Clause, Cnf, Literal};
use crate::roabp::DEFAULT_EXPANSION_BUDGET as B;

const EXPAND: VerifyMode = VerifyMode::Expand { budget: B };

fn polys(r: &PolyRing, xs: &[&str]) -> Vec<SparsePoly> {
    xs.iter().map(|s| parse_poly(r, s).unwrap()).collect()
}

fn system(
    r: &PolyRing,
    p0: &[&str],
    p1: &[&str],
    x: &[&str],
    y: &[&str],
    z: &[&str],
) -> PolySystem {
    split_system(
        r,
        &polys(r, p0),
        &polys(r, p1),
        &r.vars(x),
        &r.vars(y),
        &r.vars(z),
    )
    .unwrap()
}

fn all_alphas(zs: &[Var]) -> Vec<HashMap<Var, bool>> {
    (0..1u32 << zs.len())
        .map(|m| {
            zs.iter()
                .enumerate()
                .map(|(i, z)| (*z, m >> i & 1 == 1))
                .collect()
        })
        .collect()
}

fn axioms(s: &PolySystem) -> Vec<String> {
    s.part(Part::P0)
        .filter(|(_, e)| e.kind == Kind::Axiom)
        .map(|(_, e)| e.poly.to_string())
        .collect()
}

#[test]
fn nonmonotone_telescoping_example() {
    let r = PolyRing::new(Field::default());
    let s = system(&r, &["x1*z1*z2"], &[], &["x1"], &[], &["z1", "z2"]);
    let nf = to_znormal(&s, NormalMode::Nonmonotone, None).unwrap();
    assert_eq!(r.names(&nf.w_vars), vec!["w1", "w2"]);
    assert_eq!(
        axioms(&nf.normalized),
        vec!["x1*w1*w2", "z1 - w1", "z2 - w2"]
    );
    assert!(is_znormal(&nf.normalized));
    for d in &nf.derivations {
        let rep = d.verify(EXPAND).unwrap();
        assert!(rep.valid, "{}", rep.detail);
        assert!(rep.width <= 2);
    }
    for a in all_alphas(&r.vars(&["z1", "z2"])) {
        assert!(check_equisat(&s, &nf, &a).unwrap());
    }
}

#[test]
fn repeated_z_factors_are_telescoped_per_occurrence() {
    let r = PolyRing::new(Field::default());
    let s = system(
        &r,
        &["x1*z1^2 + 3*z1*z2 - x1"],
        &[],
        &["x1"],
        &[],
        &["z1", "z2"],
    );
    let nf = to_znormal(&s, NormalMode::Nonmonotone, None).unwrap();
    assert!(is_znormal(&nf.normalized));
    assert!(nf.derivations[0].verify(EXPAND).unwrap().valid);
}

#[test]
fn monotone_example() {
    let r = PolyRing::new(Field::default());
    let s = system(
        &r,
        &["z1*x1 - z1*x2", "z1*z2*x2", "x1"],
        &[],
        &["x1", "x2"],
        &[],
        &["z1", "z2"],
    );
    let nf = to_znormal(&s, NormalMode::Monotone, None).unwrap();
    assert_eq!(
        axioms(&nf.normalized),
        vec![
            "x1 - x2 + w1",
            "z1*w1",
            "x2 + w2 + w3",
            "z1*w2",
            "z2*w3",
            "x1"
        ]
    );
    assert!(is_monotone_znormal(&nf.normalized));
    for d in &nf.derivations {
        assert!(d.verify(EXPAND).unwrap().valid);
        assert_eq!(d.width(), 1);
    }
    assert_eq!(nf.normalized.role(nf.w_vars[0]), Some(Role::AuxW));
    for a in all_alphas(&r.vars(&["z1", "z2"])) {
        assert!(check_equisat(&s, &nf, &a).unwrap());
    }
}

#[test]
fn monotone_shape_violations() {
    let r = PolyRing::new(Field::default());
    let s = system(&r, &["z1*x1 + x2"], &[], &["x1", "x2"], &[], &["z1"]);
    assert!(matches!(
        to_znormal(&s, NormalMode::Monotone, None),
        Err(Error::Shape(_))
    ));
    let s = system(&r, &["z1^2*x1"], &[], &["x1"], &[], &["z1"]);
    assert!(matches!(
        to_znormal(&s, NormalMode::Monotone, None),
        Err(Error::Shape(_))
    ));
}

#[test]
fn normal_refutation_is_kept() {
    let r = PolyRing::new(Field::default());
    let s = system(
        &r,
        &["z1*x1", "1 - x1"],
        &["y1 - z1*y1", "1 - y1"],
        &["x1"],
        &["y1"],
        &["z1"],
    );
    let order = r.vars(&["x1", "z1", "y1"]);
    let c = refute_by_search(&s, &order).unwrap().unwrap();
    for mode in [NormalMode::Nonmonotone, NormalMode::Monotone] {
        let out = apply_normal_form(&c, mode).unwrap();
        assert!(out.normal_form.w_vars.is_empty());
        assert_eq!(out.certificate.order, c.order);
        for (a, b) in out.certificate.coefficients.iter().zip(&c.coefficients) {
            assert_eq!(a.expand(B).unwrap(), b.expand(B).unwrap());
        }
    }
}

#[test]
fn refutation_transfers_to_normal_form() {
    let r = PolyRing::new(Field::default());
    // (x1 or z1 or z2) and (not x1), with z1 = z2 = 0 forced on the P1 side.
    let s = system(
        &r,
        &["1 - x1 - z1 - z2 + x1*z1 + x1*z2 + z1*z2 - x1*z1*z2", "x1"],
        &["z1", "z2"],
        &["x1"],
        &["y1"],
        &["z1", "z2"],
    );
    let order = r.vars(&["x1", "z1", "z2", "y1"]);
    let c = refute_by_search(&s, &order).unwrap().unwrap();
    assert!(c.verify(EXPAND).unwrap().valid);
    let out = apply_normal_form(&c, NormalMode::Nonmonotone).unwrap();
    let o = &out.certificate.order;
    assert_eq!(r.names(&o[..3]), vec!["x1", "w1", "w2"]);
    assert!(is_znormal(&out.certificate.system));
    let rep = out.certificate.verify(EXPAND).unwrap();
    assert!(rep.valid, "{}", rep.detail);
    assert!(rep.width <= out.width_bound);
}

#[test]
fn order_with_late_x_is_rejected() {
    let r = PolyRing::new(Field::default());
    let s = system(
        &r,
        &["z1*x1", "1 - x1"],
        &["y1 - z1*y1", "1 - y1"],
        &["x1"],
        &["y1"],
        &["z1"],
    );
    let c = refute_by_search(&s, &r.vars(&["z1", "x1", "y1"]))
        .unwrap()
        .unwrap();
    assert!(matches!(
        apply_normal_form(&c, NormalMode::Nonmonotone),
        Err(Error::OrderMismatch(_))
    ));
}

fn random_p0(clauses: Vec<Vec<(usize, bool)>>) -> (PolyRing, PolySystem, Vec<Var>) {
    let r = PolyRing::new(Field::default());
    let x = r.vars(&["x1", "x2", "x3"]);
    let z = r.vars(&["z1", "z2", "z3"]);
    let all: Vec<Var> = x.iter().chain(&z).copied().collect();
    let mut f = Cnf::with_vars(&r, all.clone());
    for c in clauses {
        let lits = c.into_iter().map(|(v, pos)| Literal {
            var: all[v],
            positive: pos,
        });
        if let Ok(c) = Clause::new(lits.collect()) {
            f.push(c);
        }
    }
    let p0: Vec<SparsePoly> = f
        .clauses()
        .iter()
        .map(|c| crate::formulas::translate_clause(&r, c))
        .collect();
    (
        r.clone(),
        split_system(&r, &p0, &[], &x, &[], &z).unwrap(),
        z,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nonmonotone_normal_form_is_equisatisfiable(
        clauses in prop::collection::vec(prop::collection::vec((0usize..6, any::<bool>()), 1..4), 1..7)
    ) {
        let (_, s, z) = random_p0(clauses);
        let nf = to_znormal(&s, NormalMode::Nonmonotone, None).unwrap();
        prop_assert!(is_znormal(&nf.normalized));
        for d in &nf.derivations {
            prop_assert!(d.verify(EXPAND).unwrap().valid);
        }
        for a in all_alphas(&z) {
            prop_assert!(check_equisat(&s, &nf, &a).unwrap());
        }
    }
}
