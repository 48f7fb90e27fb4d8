use std::collections::HashMap;

use proptest::prelude::*;

use super::*;
use crate::algebra::{parse_poly, Field, PolyRing, SparsePoly, Var};

const B: usize = DEFAULT_EXPANSION_BUDGET;

fn ring() -> PolyRing {
    PolyRing::new(Field::prime(1_000_003).unwrap())
}

fn vars(r: &PolyRing, n: usize) -> Vec<Var> {
    (1..=n).map(|i| r.var(&format!("v{i}"))).collect()
}

#[test]
fn from_sparse_widths() {
    let r = ring();
    let (x1, x2, z1) = (r.var("x1"), r.var("x2"), r.var("z1"));
    let p = parse_poly(&r, "x1*x2 + 1").unwrap();
    let a = Roabp::from_sparse(&p, &[x1, x2]).unwrap();
    assert!(a.width() <= 2);
    assert_eq!(a.expand(B).unwrap(), p);
    let u = Roabp::from_sparse(&parse_poly(&r, "1 - x2").unwrap(), &[x1, x2]).unwrap();
    assert_eq!(u.width(), 1);
    let c = Roabp::from_sparse(&SparsePoly::from_i64(&r, 7), &[x1, x2]).unwrap();
    assert_eq!(c.width(), 1);
    let q = parse_poly(&r, "z1*x1").unwrap();
    assert_eq!(Roabp::from_sparse(&q, &[x1, z1]).unwrap().width(), 1);
    assert!(matches!(
        Roabp::from_sparse(&q, &[x1]),
        Err(crate::Error::VariableOutsideOrder(_))
    ));
}

#[test]
fn width_one_and_identity_expansions() {
    let r = ring();
    let (x1, x2) = (r.var("x1"), r.var("x2"));
    let f = r.field();
    let layers = vec![Layer::single(UniPoly::x(f)), Layer::single(UniPoly::x(f))];
    let p = Roabp::from_layers(&r, vec![x1, x2], layers).unwrap();
    assert_eq!(p.expand(B).unwrap(), parse_poly(&r, "x1*x2").unwrap());
    let mut id = Roabp::one(&r, &[x1, x2]);
    id.layers[0] = Layer::zeros(1, 3);
    id.layers[0].set(0, 0, UniPoly::constant(f.one()));
    id.layers[1] = Layer::zeros(3, 1);
    id.layers[1].set(0, 0, UniPoly::constant(f.one()));
    assert_eq!(id.expand(B).unwrap(), SparsePoly::one(&r));
}

#[test]
fn expansion_budget_is_reported() {
    let r = ring();
    let vs = vars(&r, 12);
    let mut p = Roabp::one(&r, &vs);
    for v in &vs {
        p = p
            .mul_univariate(*v, &UniPoly::linear(r.one(), r.one()))
            .unwrap();
    }
    assert_eq!(p.expand(100), Err(crate::Error::ExpansionTooLarge(100)));
    assert_eq!(p.expand(B).unwrap().sparsity(), 1 << 12);
}

#[test]
fn mul_widths_multiply() {
    let r = ring();
    let vs = vars(&r, 3);
    let a = Roabp::from_sparse(&parse_poly(&r, "v1 + v2").unwrap(), &vs).unwrap();
    let b = Roabp::from_sparse(&parse_poly(&r, "v1*v2 + v3 + 2").unwrap(), &vs).unwrap();
    assert!(a.width() <= 2 && b.width() <= 3);
    let m = a.mul(&b).unwrap();
    assert!(m.width() <= 6);
    assert_eq!(
        m.expand(B).unwrap(),
        &a.expand(B).unwrap() * &b.expand(B).unwrap()
    );
    let z = Roabp::zero(&r, &vs);
    assert_eq!(a.add(&z).unwrap().expand(B).unwrap(), a.expand(B).unwrap());
}

#[test]
fn restriction_examples() {
    let r = ring();
    let (u, v, x1) = (r.var("u"), r.var("v"), r.var("x1"));
    let p = Roabp::from_sparse(&parse_poly(&r, "u*v").unwrap(), &[u, v]).unwrap();
    let q = p
        .restrict(&HashMap::from([(u, r.one())]), &HashMap::new())
        .unwrap();
    assert_eq!(q.expand(B).unwrap(), parse_poly(&r, "v").unwrap());
    assert_eq!(q.width(), p.width());
    let total = HashMap::from([(u, r.field().from_i64(3)), (v, r.field().from_i64(5))]);
    let k = p.restrict(&total, &HashMap::new()).unwrap();
    assert!(k.order().is_empty());
    assert_eq!(k.expand(B).unwrap(), SparsePoly::from_i64(&r, 15));
    let ren = p
        .restrict(&HashMap::new(), &HashMap::from([(v, x1)]))
        .unwrap();
    assert_eq!(ren.expand(B).unwrap(), parse_poly(&r, "u*x1").unwrap());
    let bad = p.restrict(&HashMap::new(), &HashMap::from([(v, u)]));
    assert!(matches!(bad, Err(crate::Error::NonInjectiveRenaming(_))));
}

#[test]
fn cut_examples() {
    let r = ring();
    let (x1, z1) = (r.var("x1"), r.var("z1"));
    let p = Roabp::from_sparse(&parse_poly(&r, "x1*z1").unwrap(), &[x1, z1]).unwrap();
    let d = p.cut(1, B).unwrap();
    assert_eq!(d.prefix, vec![SparsePoly::var(&r, x1)]);
    assert_eq!(d.suffix, vec![SparsePoly::var(&r, z1)]);
    assert!(p.cut(0, B).is_err());
    assert!(p.cut(2, B).is_err());
    let one = Roabp::one(&r, &[x1, z1]);
    let d = one.cut(1, B).unwrap();
    assert_eq!(d.prefix, vec![SparsePoly::one(&r)]);
    let w3 = Roabp::from_sparse(&parse_poly(&r, "x1 + z1 + 2*x1*z1").unwrap(), &[x1, z1]).unwrap();
    let d = w3.cut(1, B).unwrap();
    assert_eq!(d.prefix.len(), w3.width());
    assert_eq!(w3.width(), 2);
    let mut acc = SparsePoly::zero(&r);
    for (a, b) in d.prefix.iter().zip(&d.suffix) {
        acc = &acc + &(a * b);
    }
    assert_eq!(acc, w3.expand(B).unwrap());
}

#[test]
fn identity_tests() {
    let r = ring();
    let (x1, x2) = (r.var("x1"), r.var("x2"));
    let order = [x1, x2];
    let a = Roabp::from_sparse(&parse_poly(&r, "x1 + x2").unwrap(), &order).unwrap();
    let b = Roabp::from_sparse(&parse_poly(&r, "x2 + x1").unwrap(), &order).unwrap();
    let modes = [
        PitMode::Expand { budget: B },
        PitMode::Randomized { trials: 8, seed: 1 },
    ];
    for m in modes {
        assert!(a.identity_test(&a, m).unwrap());
        assert!(a.identity_test(&b, m).unwrap());
    }
    let mut c = a.clone();
    let l = c.layers[1].get(1, 0).add(&UniPoly::constant(r.one()));
    c.layers[1].set(1, 0, l);
    for m in modes {
        assert!(!a.identity_test(&c, m).unwrap());
    }
}

#[test]
fn sum_substitution_matches_expansion() {
    let r = PolyRing::new(Field::Rational);
    let (y, x1, x2, x3, t) = (
        r.var("y"),
        r.var("x1"),
        r.var("x2"),
        r.var("x3"),
        r.var("t"),
    );
    let p = parse_poly(&r, "3*y^3 - y*t + 2*y^2*t^2 + t + 1").unwrap();
    let a = Roabp::from_sparse(&p, &[y, t]).unwrap();
    let s = a.substitute_sum(y, &[x1, x2, x3]).unwrap();
    let sum = parse_poly(&r, "x1 + x2 + x3").unwrap();
    let expect = p.substitute(&HashMap::from([(y, sum)]));
    assert_eq!(s.expand(B).unwrap(), expect);
    assert!(s.width() <= a.width() * 4);
}

#[test]
fn boolean_reduction_recombines() {
    let r = ring();
    let vs = vars(&r, 3);
    let p = parse_poly(&r, "v1^3*v2 + 2*v2^2*v3 - v1^2 + v3").unwrap();
    let a = Roabp::from_sparse(&p, &vs).unwrap();
    let (res, qs) = a.boolean_reduce(&vs);
    let mut acc = res.expand(B).unwrap();
    for (v, q) in &qs {
        acc = &acc + &(&q.expand(B).unwrap() * &SparsePoly::boolean_axiom(&r, *v));
    }
    assert_eq!(acc, p);
    for v in &vs {
        assert!(res.expand(B).unwrap().degree_in(*v) <= 1);
    }
}

#[test]
fn json_round_trip() {
    let r = ring();
    let vs = vars(&r, 4);
    let mut rng = crate::rng(7);
    for _ in 0..10 {
        let p = Roabp::random(&r, &vs, 3, 2, &mut rng);
        let text = p.to_json();
        let other = PolyRing::new(r.field());
        let q = Roabp::from_json(&other, &text).unwrap();
        assert_eq!(q.to_json(), text);
        let back = Roabp::from_json(&r, &text).unwrap();
        assert_eq!(back, p);
    }
    let c = Roabp::constant(&r, &[], r.field().from_i64(-4));
    assert_eq!(Roabp::from_json(&r, &c.to_json()).unwrap(), c);
}

#[test]
fn basis_change_keeps_width() {
    let r = PolyRing::new(Field::Rational);
    let vs = vars(&r, 4);
    let mut rng = crate::rng(3);
    let half = r.field().fraction(1, 2).unwrap();
    let mhalf = r.field().fraction(-1, 2).unwrap();
    for _ in 0..10 {
        let p = Roabp::random(&r, &vs, 4, 2, &mut rng);
        let mut q = p.clone();
        let mut sub = HashMap::new();
        for v in &vs {
            q = q.substitute_affine(*v, &half, &mhalf).unwrap();
            sub.insert(
                *v,
                parse_poly(&r, &format!("1/2 - 1/2*{}", r.name(*v))).unwrap(),
            );
        }
        assert_eq!(q.width(), p.width());
        assert_eq!(q.expand(B).unwrap(), p.expand(B).unwrap().substitute(&sub));
    }
}

fn arb_case() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=6, 1usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn add_mul_laws((seed, n, w) in arb_case()) {
        let r = ring();
        let vs = vars(&r, n);
        let mut rng = crate::rng(seed);
        let a = Roabp::random(&r, &vs, w, 2, &mut rng);
        let b = Roabp::random(&r, &vs, w, 2, &mut rng);
        let (ea, eb) = (a.expand(B).unwrap(), b.expand(B).unwrap());
        let s = a.add(&b).unwrap();
        let m = a.mul(&b).unwrap();
        prop_assert!(s.width() <= a.width() + b.width());
        prop_assert!(m.width() <= a.width() * b.width());
        prop_assert_eq!(s.expand(B).unwrap(), &ea + &eb);
        prop_assert_eq!(m.expand(B).unwrap(), &ea * &eb);
    }

    #[test]
    fn cut_identity((seed, n, w) in arb_case(), t in 0usize..8) {
        let r = ring();
        let vs = vars(&r, n.max(2));
        let mut rng = crate::rng(seed);
        let a = Roabp::random(&r, &vs, w, 2, &mut rng);
        let t = 1 + t % (vs.len() - 1);
        let d = a.cut(t, B).unwrap();
        prop_assert_eq!(d.prefix.len(), a.width());
        let mut acc = SparsePoly::zero(&r);
        for (p, s) in d.prefix.iter().zip(&d.suffix) {
            prop_assert!(p.variables().iter().all(|v| vs[..t].contains(v)));
            prop_assert!(s.variables().iter().all(|v| vs[t..].contains(v)));
            acc = &acc + &(p * s);
        }
        prop_assert_eq!(acc, a.expand(B).unwrap());
    }

    #[test]
    fn restriction_commutes((seed, n, w) in arb_case(), mask in any::<u8>()) {
        let r = ring();
        let vs = vars(&r, n);
        let mut rng = crate::rng(seed);
        let a = Roabp::random(&r, &vs, w, 2, &mut rng);
        let f = r.field();
        let sigma: HashMap<Var, _> = vs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(i, v)| (*v, f.from_i64(i as i64 - 2)))
            .collect();
        let renamed: HashMap<Var, Var> = vs.iter().map(|v| (*v, r.var(&format!("{}_r", r.name(*v))))).collect();
        let q = a.restrict(&sigma, &renamed).unwrap();
        prop_assert!(q.width() <= a.width());
        let expect = a.expand(B).unwrap().substitute_constants(&sigma).rename(&renamed);
        prop_assert_eq!(q.expand(B).unwrap(), expect);
    }

    #[test]
    fn from_sparse_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let r = ring();
        let vs = vars(&r, n);
        let mut rng = crate::rng(seed);
        let p = Roabp::random(&r, &vs, 3, 2, &mut rng).expand(B).unwrap();
        let q = Roabp::from_sparse(&p, &vs).unwrap();
        prop_assert!(q.width() <= p.sparsity().max(1));
        prop_assert_eq!(q.expand(B).unwrap(), p);
    }
}

#[test]
fn exact_zero_test_matches_expansion() {
    let r = ring();
    let vs = vars(&r, 5);
    let mut rng = crate::rng(21);
    for _ in 0..30 {
        let a = Roabp::random(&r, &vs, 3, 2, &mut rng);
        let b = Roabp::random(&r, &vs, 3, 2, &mut rng);
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert!(ab.identity_test(&ba, PitMode::Exact).unwrap());
        let diff = a.add(&b.neg()).unwrap();
        assert_eq!(diff.is_zero_exact(), diff.expand(B).unwrap().is_zero());
        assert_eq!(
            a.identity_test(&b, PitMode::Exact).unwrap(),
            a.expand(B).unwrap() == b.expand(B).unwrap()
        );
    }
}

#[test]
fn sum_of_products_expands() {
    let r = ring();
    let vs = vars(&r, 3);
    let f = r.field();
    let t1 = (f.from_i64(2), HashMap::from([(vs[0], UniPoly::x(f))]));
    let t2 = (
        f.from_i64(-1),
        HashMap::from([
            (vs[1], UniPoly::x(f)),
            (vs[2], UniPoly::linear(f.one(), f.from_i64(-1))),
        ]),
    );
    let p = Roabp::sum_of_products(&r, &vs, &[t1, t2]).unwrap();
    assert_eq!(p.width(), 2);
    assert_eq!(
        p.expand(B).unwrap(),
        parse_poly(&r, "2*v1 - v2 + v2*v3").unwrap()
    );
}
