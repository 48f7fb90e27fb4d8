use roabp_ips::algebra::{Field, PolyRing};
use roabp_ips::certificate::{refute_by_search, LinearIpsCertificate, VerifyMode};
use roabp_ips::formulas::{emit_dimacs, parse_dimacs, split_from_cnfs, Role};
use roabp_ips::instances::gen_split_formula;
use roabp_ips::interpolate::{check_interpolant, interpolate};
use roabp_ips::normalform::NormalMode;
use roabp_ips::spanprog::SpanProgram;
use roabp_ips::upperbounds::{refute_tseitin, TseitinInstance};

#[test]
fn gen_split_refutation_interpolates_gen() {
    let r = PolyRing::new(Field::default());
    let split = gen_split_formula(&r, 2).unwrap();
    let s = split.system().unwrap();
    let order: Vec<_> = [Role::X, Role::Z, Role::Y]
        .iter()
        .flat_map(|k| s.vars_with_role(*k))
        .collect();
    let c = refute_by_search(&s, &order).unwrap().expect("unsat");
    assert!(c.verify(VerifyMode::default()).unwrap().valid);
    let (_, ex) = interpolate(&c, NormalMode::Monotone).unwrap();
    assert!(ex.program.is_monotone());
    assert!(check_interpolant(&ex.program, &s).unwrap().ok);
}

#[test]
fn artifacts_survive_serialization() {
    let r = PolyRing::new(Field::default());
    let text = "c var 1 x1\nc var 2 z1\nc var 3 y1\np cnf 3 4\n1 0\n-1 2 0\n-2 3 0\n-3 0\n";
    let f = parse_dimacs(&r, text, "v").unwrap().cnf;
    assert_eq!(
        parse_dimacs(&PolyRing::new(Field::default()), &emit_dimacs(&f, "v"), "v")
            .unwrap()
            .cnf
            .clause_multiset()
            .len(),
        4
    );
    let (x, z, y) = (r.vars(&["x1"]), r.vars(&["z1"]), r.vars(&["y1"]));
    let mut phi0 = roabp_ips::formulas::Cnf::with_vars(&r, vec![x[0], z[0]]);
    let mut phi1 = roabp_ips::formulas::Cnf::with_vars(&r, vec![z[0], y[0]]);
    for (i, c) in f.clauses().iter().enumerate() {
        if i < 2 {
            phi0.push(c.clone())
        } else {
            phi1.push(c.clone())
        }
    }
    let s = split_from_cnfs(&phi0, &phi1, &x, &y, &z).unwrap();
    let order = vec![x[0], z[0], y[0]];
    let c = refute_by_search(&s, &order).unwrap().unwrap();
    let back = LinearIpsCertificate::from_json(&c.to_json()).unwrap();
    assert_eq!(back.to_json(), c.to_json());
    let (_, ex) = interpolate(&back, NormalMode::Nonmonotone).unwrap();
    let sp = SpanProgram::from_json(back.ring(), &ex.program.to_json()).unwrap();
    assert_eq!(sp.truth_table().unwrap(), ex.program.truth_table().unwrap());
    assert!(check_interpolant(&sp, &back.system).unwrap().ok);

    let t = TseitinInstance::parse(&TseitinInstance::complete(4).to_text()).unwrap();
    let rt = refute_tseitin(&t, &PolyRing::new(Field::default()), None).unwrap();
    let again = LinearIpsCertificate::from_json(&rt.certificate.to_json()).unwrap();
    assert!(again.verify(VerifyMode::Exact).unwrap().valid);
}
