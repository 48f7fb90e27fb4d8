use std::collections::{HashMap, HashSet, VecDeque};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use super::*;
use crate::algebra::{Field, PolyRing, Var};
use crate::certificate::{refute_by_search, VerifyMode};
use crate::formulas::{brute_force_sat, dpll, translate_cnf, Clause, Cnf, Literal};

/// Independent reachability oracle: breadth-first search where a point is
/// reached once both premises of some triple are.
fn bfs_oracle(g: &GenInstance) -> bool {
    let mut reached: HashSet<usize> = HashSet::from([1]);
    let mut queue: VecDeque<usize> = VecDeque::from([1]);
    while let Some(p) = queue.pop_front() {
        for &(a, b, c) in &g.triples {
            if (a == p || b == p)
                && reached.contains(&a)
                && reached.contains(&b)
                && reached.insert(c)
            {
                queue.push_back(c);
            }
        }
    }
    reached.contains(&g.n)
}

fn random_gen<R: Rng>(rng: &mut R, n: usize, density: f64) -> GenInstance {
    let ts = (0..n.pow(3))
        .filter(|_| rng.gen_bool(density))
        .map(|i| GenInstance::triple_at(n, i));
    GenInstance::new(n, ts).unwrap()
}

#[test]
fn gen_examples() {
    assert!(gen_eval(
        &GenInstance::new(3, [(1, 1, 2), (2, 2, 3)]).unwrap()
    ));
    assert!(!gen_eval(&GenInstance::new(3, [(2, 2, 3)]).unwrap()));
    assert!(gen_eval(&GenInstance::new(1, []).unwrap()));
    assert!(GenInstance::new(2, [(1, 3, 2)]).is_err());
}

#[test]
fn gen_matches_oracle_and_is_monotone() {
    let mut rng = crate::rng(5);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let density = rng.gen_range(0.0..0.15);
        let g = random_gen(&mut rng, n, density);
        assert_eq!(gen_eval(&g), bfs_oracle(&g), "{g:?}");
    }
    for _ in 0..100 {
        let n = rng.gen_range(2..=6);
        let g = random_gen(&mut rng, n, 0.05);
        let mut h = g.clone();
        h.triples.extend(random_gen(&mut rng, n, 0.05).triples);
        assert!(gen_eval(&g) <= gen_eval(&h));
    }
}

#[test]
fn circuit_computes_gen() {
    let mut rng = crate::rng(6);
    for n in 2..=4 {
        let r = PolyRing::new(Field::default());
        let (c, z) = gen_circuit(&r, n);
        for _ in 0..50 {
            let g = random_gen(&mut rng, n, 0.1);
            let a: HashMap<Var, bool> = z.iter().copied().zip(g.characteristic_vector()).collect();
            assert_eq!(c.eval(|v| a[&v]), gen_eval(&g));
        }
    }
}

fn polarity_ok(s: &GenSplit) {
    let z: HashSet<Var> = s.z.iter().copied().collect();
    for c in s.phi0.clauses() {
        assert!(c
            .literals()
            .iter()
            .all(|l| !z.contains(&l.var) || !l.positive));
        assert!(c.len() <= 3);
    }
    for c in s.phi1.clauses() {
        assert!(c
            .literals()
            .iter()
            .all(|l| !z.contains(&l.var) || l.positive));
        assert!(c.len() <= 3);
    }
}

#[test]
fn split_formula_n2_exhaustive() {
    let r = PolyRing::new(Field::default());
    let s = gen_split_formula(&r, 2).unwrap();
    assert_eq!(s.z.len(), 8);
    polarity_ok(&s);
    for m in 0..256u32 {
        let v: Vec<bool> = (0..8).map(|i| m >> i & 1 == 1).collect();
        let g = GenInstance::from_vector(2, &v);
        let a = s.assignment(&g);
        let sat0 = dpll(&s.phi0, &a).is_some();
        let sat1 = dpll(&s.phi1, &a).is_some();
        assert_eq!(sat0, !gen_eval(&g));
        assert_eq!(sat1, gen_eval(&g));
    }
    assert!(!brute_force_sat(&s.system().unwrap(), None).unwrap().sat);
}

#[test]
fn split_formula_n3() {
    let r = PolyRing::new(Field::default());
    let s = gen_split_formula(&r, 3).unwrap();
    polarity_ok(&s);
    let yes = GenInstance::new(3, [(1, 1, 2), (2, 2, 3)]).unwrap();
    let a = s.assignment(&yes);
    assert!(dpll(&s.phi1, &a).is_some());
    assert!(dpll(&s.phi0, &a).is_none());
    let mut rng = crate::rng(8);
    for _ in 0..40 {
        let g = random_gen(&mut rng, 3, 0.15);
        let a = s.assignment(&g);
        assert_eq!(dpll(&s.phi0, &a).is_some(), !gen_eval(&g));
        assert_eq!(dpll(&s.phi1, &a).is_some(), gen_eval(&g));
    }
    assert!(gen_split_formula(&r, 1).is_err());
}

fn cnf(r: &PolyRing, vars: &[&str], clauses: &[&[i32]]) -> Cnf {
    let vs = r.vars(vars);
    let mut f = Cnf::with_vars(r, vs.clone());
    for c in clauses {
        let lits = c
            .iter()
            .map(|k| Literal {
                var: vs[k.unsigned_abs() as usize - 1],
                positive: *k > 0,
            })
            .collect();
        f.push(Clause::new(lits).unwrap());
    }
    f
}

fn all_signs(r: &PolyRing) -> Cnf {
    let mut cls: Vec<Vec<i32>> = Vec::new();
    for m in 0..8 {
        cls.push(
            (1..=3)
                .map(|k| if m >> (k - 1) & 1 == 1 { k } else { -k })
                .collect(),
        );
    }
    let refs: Vec<&[i32]> = cls.iter().map(|c| c.as_slice()).collect();
    cnf(r, &["x1", "x2", "x3"], &refs)
}

#[test]
fn single_clause_counts() {
    let r = PolyRing::new(Field::default());
    let phi = cnf(&r, &["x1", "x2", "x3"], &[&[1, -2, 3]]);
    let l = lift(&phi).unwrap();
    assert_eq!(l.selectors.len(), 6);
    assert_eq!(l.phi1.clauses().len(), 6);
    assert!(l
        .phi1
        .clauses()
        .iter()
        .all(|c| c.len() == 4 && !c.literals()[0].positive));
    assert_eq!(l.phi2.clauses().len(), 1 + 15);
    assert_eq!(l.phi2.clauses()[0].len(), 6);
    let idx: serde_json::Value = serde_json::from_str(&l.index_json()).unwrap();
    assert_eq!(idx["selectors"].as_array().unwrap().len(), 6);
}

#[test]
fn restriction_example_order() {
    let r = PolyRing::new(Field::default());
    let phi = cnf(&r, &["x1", "x2", "x3"], &[&[1, -2, 3]]);
    let l = lift(&phi).unwrap();
    let v = &l.v;
    let mut order: Vec<Var> = l.selectors.iter().map(|s| s.var).collect();
    order.extend([v[1], v[2], v[0]]);
    let rho = restriction_for_order(&l, &order).unwrap();
    let x = phi.vars();
    assert_eq!(
        rho.renaming,
        HashMap::from([(v[1], x[0]), (v[2], x[1]), (v[0], x[2])])
    );
    let back = rho.restrict_cnf(&l.psi()).unwrap();
    assert_eq!(back.clause_multiset(), phi.clause_multiset());
    let chosen = &l.selectors[rho.chosen[0]];
    assert_eq!(chosen.triple, [1, 2, 0]);

    let ident: Vec<Var> = v.iter().copied().collect();
    let rho = restriction_for_order(&l, &ident).unwrap();
    assert_eq!(l.selectors[rho.chosen[0]].triple, [0, 1, 2]);
}

#[test]
fn psi_is_unsat_and_round_trips() {
    let r = PolyRing::new(Field::default());
    let phi = all_signs(&r);
    let l = lift(&phi).unwrap();
    assert_eq!(l.selectors.len(), 48);
    let psi = l.psi();
    assert!(psi.brute_force().is_none());
    let mut rng = crate::rng(3);
    let mut all = psi.vars().to_vec();
    for _ in 0..5 {
        all.shuffle(&mut rng);
        let rho = restriction_for_order(&l, &all).unwrap();
        assert!(l.phi2.eval(|v| rho.u[&v]));
        assert_eq!(
            rho.restrict_cnf(&l.phi1).unwrap().clause_multiset(),
            phi.clause_multiset()
        );
    }
}

#[test]
fn random_orders_on_four_variables() {
    let r = PolyRing::new(Field::default());
    let phi = cnf(
        &r,
        &["x1", "x2", "x3", "x4"],
        &[&[1, 2, 3], &[-1, 2, -4], &[-2, 3, 4], &[1, -3, -4]],
    );
    let l = lift(&phi).unwrap();
    let mut rng = crate::rng(4);
    let mut all = l.psi().vars().to_vec();
    for _ in 0..20 {
        all.shuffle(&mut rng);
        let rho = restriction_for_order(&l, &all).unwrap();
        assert!(l.phi2.eval(|v| rho.u[&v]));
        assert_eq!(
            rho.restrict_cnf(&l.psi()).unwrap().clause_multiset(),
            phi.clause_multiset()
        );
    }
}

#[test]
fn restricted_refutation_verifies() {
    let r = PolyRing::new(Field::default());
    let phi = all_signs(&r);
    let l = lift(&phi).unwrap();
    let psi = translate_cnf(&l.psi());
    let mut order = l.psi().vars().to_vec();
    let mut rng = crate::rng(11);
    order.shuffle(&mut rng);
    let c = refute_by_search(&psi, &order).unwrap().unwrap();
    let rep = c.verify(VerifyMode::Exact).unwrap();
    assert!(rep.valid);
    let rho = restriction_for_order(&l, &order).unwrap();
    let out = apply_restriction_to_certificate(&c, &l, &rho).unwrap();
    assert!(out.width() <= c.width());
    let rep = out.verify(VerifyMode::default()).unwrap();
    assert!(rep.valid, "{}", rep.detail);
    // Satisfied clause axioms restrict to zero.
    let sat = l.selectors.iter().position(|s| !rho.u[&s.var]).unwrap();
    assert!(rho.restrict_poly(&psi.entries()[sat].poly).is_zero());
}

#[test]
fn padding_short_clauses() {
    let r = PolyRing::new(Field::default());
    let phi = cnf(&r, &["x1", "x2", "x3"], &[&[1], &[-1, 2], &[-2, 3], &[-3]]);
    let p = pad_to_three(&phi).unwrap();
    assert!(p.clauses().iter().all(|c| c.len() == 3));
    assert!(p.brute_force().is_none());
    assert!(lift(&phi).is_err());
    assert!(lift(&p).is_ok());
    let sat = cnf(&r, &["x1", "x2"], &[&[1], &[2]]);
    assert!(pad_to_three(&sat).unwrap().brute_force().is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn padding_is_equisatisfiable(cls in prop::collection::vec(prop::collection::vec((0usize..4, any::<bool>()), 1..4), 1..10)) {
        let r = PolyRing::new(Field::default());
        let vs = r.vars(&["x1", "x2", "x3", "x4"]);
        let mut f = Cnf::with_vars(&r, vs.clone());
        for c in cls {
            let lits: Vec<Literal> = c.into_iter().map(|(v, s)| Literal { var: vs[v], positive: s }).collect();
            let _ = f.push_literals(&lits);
        }
        let p = pad_to_three(&f).unwrap();
        prop_assert_eq!(p.brute_force().is_some(), f.brute_force().is_some());
    }
}
