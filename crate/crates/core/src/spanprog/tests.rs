use proptest::prelude::*;

use super::*;

fn worked() -> (PolyRing, SpanProgram) {
    let r = PolyRing::new(Field::default());
    let z1 = r.var("z1");
    let mut s = SpanProgram::new(&r, vec![z1], SparsePoly::one(&r));
    s.push(Label::Pos(z1), parse_poly(&r, "x1").unwrap())
        .unwrap();
    s.push(Label::One, parse_poly(&r, "1 - x1").unwrap())
        .unwrap();
    (r, s)
}

#[test]
fn worked_interpolant_evaluates() {
    let (_, s) = worked();
    assert_eq!(s.truth_table().unwrap(), vec![false, true]);
    assert!(s.is_monotone());
    let w = s.span_eval_with_witness(&assignment(&s.z, 1)).unwrap();
    assert_eq!(w.combination.unwrap().len(), 2);
}

#[test]
fn empty_program_with_zero_target_accepts() {
    let r = PolyRing::new(Field::default());
    let z = r.vars(&["z1", "z2"]);
    let s = SpanProgram::new(&r, z, SparsePoly::zero(&r));
    assert_eq!(s.truth_table().unwrap(), vec![true; 4]);
}

#[test]
fn negative_label_semantics() {
    let r = PolyRing::new(Field::default());
    let z1 = r.var("z1");
    let mut s = SpanProgram::new(&r, vec![z1], SparsePoly::one(&r));
    s.push(Label::Neg(z1), SparsePoly::one(&r)).unwrap();
    assert!(!s.is_monotone());
    assert!(s.selected(&assignment(&s.z, 1)).unwrap().is_empty());
    assert_eq!(s.truth_table().unwrap(), vec![true, false]);
}

#[test]
fn partial_assignment_is_rejected() {
    let (_, s) = worked();
    assert!(matches!(
        s.span_eval(&HashMap::new()),
        Err(Error::PartialAssignment(_))
    ));
}

#[test]
fn unknown_label_variable_is_rejected() {
    let (r, mut s) = worked();
    let q = r.var("q");
    assert!(s.push(Label::Pos(q), SparsePoly::one(&r)).is_err());
}

#[test]
fn monotone_desugar_keeps_function() {
    let (_, s) = worked();
    let d = s.desugar_constant_labels().unwrap();
    assert!(!d.constant_one);
    assert!(d.program.is_monotone());
    assert!(d.program.entries.iter().all(|e| e.label != Label::One));
    assert_eq!(d.program.truth_table().unwrap(), s.truth_table().unwrap());
    assert!(d.program.size() <= s.size() * s.z.len());
}

#[test]
fn nonmonotone_desugar_uses_first_name() {
    let r = PolyRing::new(Field::default());
    let z = r.vars(&["zb", "za"]);
    let mut s = SpanProgram::new(&r, z.clone(), SparsePoly::one(&r));
    s.push(Label::Neg(z[0]), parse_poly(&r, "x1").unwrap())
        .unwrap();
    s.push(Label::One, parse_poly(&r, "1 - x1").unwrap())
        .unwrap();
    let d = s.desugar_constant_labels().unwrap();
    assert_eq!(d.program.entries[1].label, Label::Pos(z[1]));
    assert_eq!(d.program.entries[2].label, Label::Neg(z[1]));
    assert_eq!(d.program.truth_table().unwrap(), s.truth_table().unwrap());
    assert!(d.program.size() <= 2 * s.size());
}

#[test]
fn constant_one_monotone_is_flagged() {
    let r = PolyRing::new(Field::default());
    let z1 = r.var("z1");
    let mut s = SpanProgram::new(&r, vec![z1], SparsePoly::one(&r));
    s.push(Label::One, SparsePoly::one(&r)).unwrap();
    assert!(s.desugar_constant_labels().unwrap().constant_one);
    let empty = SpanProgram::new(&r, vec![], SparsePoly::one(&r));
    assert!(empty.desugar_constant_labels().is_err());
}

#[test]
fn file_round_trip() {
    let (r, s) = worked();
    let text = s.to_json();
    let back = SpanProgram::from_json(&r, &text).unwrap();
    assert_eq!(back, s);
    assert_eq!(back.to_json(), text);
    assert!(Label::parse(&r, "~ ").is_err());
}

fn program(entries: Vec<(u8, usize, u8)>, nz: usize) -> SpanProgram {
    let r = PolyRing::new(Field::prime(7).unwrap());
    let z: Vec<Var> = (1..=nz).map(|i| r.var(&format!("z{i}"))).collect();
    let basis = ["1", "x1", "x2", "x1*x2", "1 - x1", "x1 + x2"];
    let mut s = SpanProgram::new(&r, z.clone(), SparsePoly::one(&r));
    for (kind, zi, b) in entries {
        let label = match kind % 3 {
            0 => Label::One,
            1 => Label::Pos(z[zi % nz]),
            _ => Label::Neg(z[zi % nz]),
        };
        s.push(
            label,
            parse_poly(&r, basis[b as usize % basis.len()]).unwrap(),
        )
        .unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_programs_compute_monotone_functions(
        entries in prop::collection::vec((1u8..2, 0usize..3, 0u8..6), 0..6)
    ) {
        let s = program(entries, 3);
        prop_assert!(s.is_monotone());
        let t = s.truth_table().unwrap();
        for a in 0..8usize {
            for b in 0..8usize {
                if a & b == a {
                    prop_assert!(t[a] <= t[b]);
                }
            }
        }
    }

    #[test]
    fn desugar_agrees(entries in prop::collection::vec((0u8..3, 0usize..3, 0u8..6), 0..6)) {
        let s = program(entries, 3);
        let d = s.desugar_constant_labels().unwrap();
        if !d.constant_one {
            prop_assert_eq!(d.program.truth_table().unwrap(), s.truth_table().unwrap());
        }
    }
}
