use proptest::prelude::*;

use super::*;
use crate::algebra::{parse_poly, Field, PolyRing};
use crate::certificate::refute_by_search;
use crate::formulas::{split_from_cnfs, split_system, Clause, Cnf, Literal};

const EXPAND: VerifyMode = VerifyMode::Expand {
    budget: DEFAULT_EXPANSION_BUDGET,
};

fn worked() -> LinearIpsCertificate {
    let r = PolyRing::new(Field::default());
    let (x1, z1, y1) = (r.var("x1"), r.var("z1"), r.var("y1"));
    let p0 = vec![
        parse_poly(&r, "z1*x1").unwrap(),
        parse_poly(&r, "1 - x1").unwrap(),
    ];
    let p1 = vec![
        parse_poly(&r, "y1 - z1*y1").unwrap(),
        parse_poly(&r, "1 - y1").unwrap(),
    ];
    let s = split_system(&r, &p0, &p1, &[x1], &[y1], &[z1]).unwrap();
    let order = vec![x1, z1, y1];
    let cs = ["1", "z1", "0", "1", "1 - z1", "0", "0"]
        .iter()
        .map(|c| Roabp::from_sparse(&parse_poly(&r, c).unwrap(), &order).unwrap())
        .collect();
    LinearIpsCertificate::refutation(s, order, cs).unwrap()
}

fn entries(sp: &SpanProgram) -> Vec<(String, String)> {
    sp.entries
        .iter()
        .map(|e| (e.label.display(sp.ring()), e.vector.to_string()))
        .collect()
}

#[test]
fn worked_extraction() {
    let c = worked();
    assert!(c.verify(EXPAND).unwrap().valid);
    for mode in [NormalMode::Monotone, NormalMode::Nonmonotone] {
        let spec = SplitSpec::from_system(&c.system, mode);
        let ex = extract_span_program(&c, &spec).unwrap();
        assert_eq!(
            entries(&ex.program),
            vec![
                ("z1".to_string(), "x1".to_string()),
                ("1".to_string(), "-x1 + 1".to_string())
            ]
        );
        assert!(ex.program.is_monotone());
        assert!(ex.raw_size <= ex.size_bound);
        assert_eq!(ex.cut_index, 1);
        let chk = check_interpolant(&ex.program, &c.system).unwrap();
        assert!(chk.ok);
        assert_eq!(chk.assignments, 2);
    }
}

#[test]
fn positive_witness_refutes_p0() {
    let c = worked();
    let spec = SplitSpec::from_system(&c.system, NormalMode::Monotone);
    let ex = extract_span_program(&c, &spec).unwrap();
    let z1 = c.ring().lookup("z1").unwrap();
    let on: HashMap<Var, bool> = [(z1, true)].into();
    let (cert, rep) = positive_witness(&ex, &c, &on).unwrap().unwrap();
    assert!(rep.valid, "{}", rep.detail);
    assert!(cert.system.mentioned().iter().all(|v| spec.x.contains(v)));
    let off: HashMap<Var, bool> = [(z1, false)].into();
    assert!(positive_witness(&ex, &c, &off).unwrap().is_none());
}

#[test]
fn deleting_an_entry_is_caught() {
    let c = worked();
    let spec = SplitSpec::from_system(&c.system, NormalMode::Monotone);
    let mut sp = extract_span_program(&c, &spec).unwrap().program;
    sp.entries.remove(1);
    let chk = check_interpolant(&sp, &c.system).unwrap();
    assert!(!chk.ok);
    let (alpha, dir) = chk.counterexample.unwrap();
    assert_eq!(dir, Direction::RejectsSatisfiableP1);
    assert_eq!(alpha.values().copied().collect::<Vec<_>>(), vec![true]);
    // Brute-force confirmation of the reported direction.
    assert!(
        brute_force_sat(&c.system.restrict_to(&[Part::P1]), Some(&alpha))
            .unwrap()
            .sat
    );
}

#[test]
fn accepting_everything_is_caught() {
    let c = worked();
    let mut sp = SpanProgram::new(
        c.ring(),
        SplitSpec::from_system(&c.system, NormalMode::Monotone).z,
        SparsePoly::one(c.ring()),
    );
    sp.push(Label::One, SparsePoly::one(c.ring())).unwrap();
    let chk = check_interpolant(&sp, &c.system).unwrap();
    assert_eq!(
        chk.counterexample.unwrap().1,
        Direction::AcceptsSatisfiableP0
    );
}

#[test]
fn satisfiable_system_is_refused() {
    let r = PolyRing::new(Field::default());
    let (x1, z1, y1) = (r.var("x1"), r.var("z1"), r.var("y1"));
    let s = split_system(
        &r,
        &[parse_poly(&r, "z1*x1").unwrap()],
        &[],
        &[x1],
        &[y1],
        &[z1],
    )
    .unwrap();
    let sp = SpanProgram::new(&r, vec![z1], SparsePoly::one(&r));
    assert_eq!(check_interpolant(&sp, &s), Err(Error::Satisfiable));
}

#[test]
fn zero_coefficients_are_pruned() {
    let c = worked();
    let z = Roabp::zero(c.ring(), &c.order);
    let ex = extract_span_program(
        &c.clone().with_coefficient(1, z).unwrap(),
        &SplitSpec::from_system(&c.system, NormalMode::Monotone),
    )
    .unwrap();
    assert_eq!(ex.program.size(), 1);
    assert!(ex.provenance.iter().all(|(k, _)| *k != 1));
}

#[test]
fn order_and_shape_violations() {
    let c = worked();
    let spec = SplitSpec::from_system(&c.system, NormalMode::Monotone);
    let mut bad = c.clone();
    bad.order = vec![c.order[1], c.order[0], c.order[2]];
    assert!(matches!(
        spec.cut_position(&bad.order),
        Err(Error::OrderMismatch(_))
    ));

    let r = PolyRing::new(Field::default());
    let (x1, z1, y1) = (r.var("x1"), r.var("z1"), r.var("y1"));
    let p0 = vec![
        parse_poly(&r, "1 - x1 - z1 + x1*z1").unwrap(),
        parse_poly(&r, "x1").unwrap(),
    ];
    let p1 = vec![parse_poly(&r, "z1").unwrap()];
    let s = split_system(&r, &p0, &p1, &[x1], &[y1], &[z1]).unwrap();
    let order = vec![x1, z1, y1];
    let c = refute_by_search(&s, &order).unwrap().unwrap();
    let mono = SplitSpec::from_system(&s, NormalMode::Monotone);
    assert!(matches!(
        extract_span_program(&c, &mono),
        Err(Error::Shape(_))
    ));
    let non = SplitSpec::from_system(&s, NormalMode::Nonmonotone);
    let ex = extract_span_program(&c, &non).unwrap();
    assert!(check_interpolant(&ex.program, &s).unwrap().ok);
}

fn random_split(c0: Vec<Vec<(usize, bool)>>, c1: Vec<Vec<(usize, bool)>>) -> PolySystem {
    let r = PolyRing::new(Field::default());
    let x = r.vars(&["x1", "x2", "x3"]);
    let z = r.vars(&["z1", "z2"]);
    let y = r.vars(&["y1", "y2", "y3"]);
    let build = |side: &[Var], cls: Vec<Vec<(usize, bool)>>| {
        let vars: Vec<Var> = side.iter().chain(&z).copied().collect();
        let mut f = Cnf::with_vars(&r, vars.clone());
        for c in cls {
            let lits = c.into_iter().map(|(v, pos)| Literal {
                var: vars[v % vars.len()],
                positive: pos,
            });
            if let Ok(c) = Clause::new(lits.collect()) {
                f.push(c);
            }
        }
        f
    };
    let f0 = build(&x, c0);
    let f1 = build(&y, c1);
    split_from_cnfs(&f0, &f1, &x, &y, &z).unwrap()
}

fn clauses() -> impl Strategy<Value = Vec<Vec<(usize, bool)>>> {
    prop::collection::vec(
        prop::collection::vec((0usize..5, any::<bool>()), 1..3),
        1..8,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn extracted_programs_interpolate(c0 in clauses(), c1 in clauses()) {
        let s = random_split(c0, c1);
        let order: Vec<Var> = [Role::X, Role::Z, Role::Y].iter().flat_map(|r| s.vars_with_role(*r)).collect();
        let Some(c) = refute_by_search(&s, &order).unwrap() else {
            return Ok(());
        };
        prop_assert!(c.verify(EXPAND).unwrap().valid);
        let (n, ex) = interpolate(&c, NormalMode::Nonmonotone).unwrap();
        prop_assert!(n.certificate.verify(EXPAND).unwrap().valid);
        prop_assert!(ex.raw_size <= ex.size_bound);
        let chk = check_interpolant(&ex.program, &n.certificate.system).unwrap();
        prop_assert!(chk.ok, "{:?}", chk.failures);
        let chk = check_interpolant(&ex.program, &s).unwrap();
        prop_assert!(chk.ok);
        for m in 0..4u64 {
            let alpha = assignment(&ex.program.z, m);
            if let Some((_, rep)) = positive_witness(&ex, &n.certificate, &alpha).unwrap() {
                prop_assert!(rep.valid);
            }
        }
    }
}
