use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use roabp_ips::algebra::{parse_poly, Field, PolyRing};
use roabp_ips::certificate::LinearIpsCertificate;
use roabp_ips::formulas::split_system;
use roabp_ips::roabp::Roabp;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_roabp-ips"));
    c.env_remove("IPS_FIELD");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn worked_certificate(zero_at: Option<usize>) -> String {
    let r = PolyRing::new(Field::default());
    let (x1, z1, y1) = (r.var("x1"), r.var("z1"), r.var("y1"));
    let p0 = [
        parse_poly(&r, "z1*x1").unwrap(),
        parse_poly(&r, "1 - x1").unwrap(),
    ];
    let p1 = [
        parse_poly(&r, "y1 - z1*y1").unwrap(),
        parse_poly(&r, "1 - y1").unwrap(),
    ];
    let sys = split_system(&r, &p0, &p1, &[x1], &[y1], &[z1]).unwrap();
    let order = vec![x1, z1, y1];
    let mut cs = ["1", "z1", "0", "1", "1 - z1", "0", "0"];
    if let Some(i) = zero_at {
        cs[i] = "0";
    }
    let cs = cs
        .iter()
        .map(|c| Roabp::from_sparse(&parse_poly(&r, c).unwrap(), &order).unwrap())
        .collect();
    LinearIpsCertificate::refutation(sys, order, cs)
        .unwrap()
        .to_json()
}

const CONTRADICTION: &str = "p cnf 1 2\n1 0\n-1 0\n";

const ALL_SIGNS: &str = "p cnf 3 8\n1 2 3 0\n-1 2 3 0\n1 -2 3 0\n-1 -2 3 0\n\
                         1 2 -3 0\n-1 2 -3 0\n1 -2 -3 0\n-1 -2 -3 0\n";

#[test]
fn verify_worked_example() {
    let d = TempDir::new().unwrap();
    let good = path(&d, "good.json");
    fs::write(&good, worked_certificate(None)).unwrap();
    let o = run(&["verify", s(&good)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "valid, width 1");
    for mode in ["randomized", "exact"] {
        let o = run(&["verify", s(&good), "--mode", mode]);
        assert_eq!(code(&o), 0, "{mode}");
        assert!(stdout(&o).starts_with("valid, width 1"));
    }
}

#[test]
fn corrupted_certificate_exits_one() {
    let d = TempDir::new().unwrap();
    let bad = path(&d, "bad.json");
    fs::write(&bad, worked_certificate(Some(1))).unwrap();
    let o = run(&["verify", s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("invalid"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let d = TempDir::new().unwrap();
    let junk = path(&d, "junk.json");
    fs::write(&junk, "{ not json").unwrap();
    assert_eq!(code(&run(&["verify", s(&junk)])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["verify"])), 2);
    assert_eq!(code(&run(&["verify", "/nonexistent/file.json"])), 2);
    let cnf = path(&d, "bad.cnf");
    fs::write(&cnf, "p cnf 1 1\n2 0\n").unwrap();
    assert_eq!(code(&run(&["translate", s(&cnf)])), 2);
    assert_eq!(code(&run(&["--field", "12", "build-fphp", "--n", "2"])), 2);
    let good = path(&d, "good.json");
    fs::write(&good, worked_certificate(None)).unwrap();
    assert_eq!(code(&run(&["--field", "rational", "verify", s(&good)])), 2);
}

#[test]
fn translate_solve_verify() {
    let d = TempDir::new().unwrap();
    let (cnf, sys, cert) = (path(&d, "a.cnf"), path(&d, "a.json"), path(&d, "c.json"));
    fs::write(&cnf, CONTRADICTION).unwrap();
    assert_eq!(code(&run(&["translate", s(&cnf), "-o", s(&sys)])), 0);
    assert_eq!(code(&run(&["ns-solve", s(&sys), "-o", s(&cert)])), 0);
    assert_eq!(stdout(&run(&["verify", s(&cert)])).trim(), "valid, width 1");

    let sat = path(&d, "sat.cnf");
    fs::write(&sat, "p cnf 2 1\n1 2 0\n").unwrap();
    let ssys = path(&d, "sat.json");
    assert_eq!(code(&run(&["translate", s(&sat), "-o", s(&ssys)])), 0);
    assert_eq!(code(&run(&["ns-solve", s(&ssys)])), 1);
}

#[test]
fn gen_interpolation_pipeline() {
    let d = TempDir::new().unwrap();
    let (sys, cert, sp) = (path(&d, "g.json"), path(&d, "gc.json"), path(&d, "sp.json"));
    assert_eq!(code(&run(&["gen-split", "--n", "2", "-o", s(&sys)])), 0);
    assert_eq!(
        code(&run(&["ns-solve", s(&sys), "--search", "-o", s(&cert)])),
        0
    );
    let o = run(&[
        "extract-interpolant",
        s(&cert),
        "--mode",
        "monotone",
        "-o",
        s(&sp),
    ]);
    assert_eq!(code(&o), 0);
    let o = run(&["check-interpolant", s(&sp), s(&sys)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "interpolant on all 256 assignments");
    let on = run(&["eval-span", s(&sp), "--assign", &gen2_assignment(true)]);
    assert_eq!(stdout(&on).trim(), "accept");
    let off = run(&["eval-span", s(&sp), "--assign", &gen2_assignment(false)]);
    assert_eq!(stdout(&off).trim(), "reject");
    let table = stdout(&run(&["eval-span", s(&sp)]));
    assert_eq!(table.lines().count(), 256);
    assert_eq!(
        code(&run(&["eval-span", s(&sp), "--assign", "z_1_1_2=1"])),
        2
    );
}

fn gen2_assignment(with_112: bool) -> String {
    let mut parts = Vec::new();
    for a in 1..=2 {
        for b in 1..=2 {
            for c in 1..=2 {
                let on = with_112 && (a, b, c) == (1, 1, 2);
                parts.push(format!("z_{a}_{b}_{c}={}", on as u8));
            }
        }
    }
    parts.join(",")
}

#[test]
fn wrong_interpolant_exits_one() {
    let d = TempDir::new().unwrap();
    let (sys, sp) = (path(&d, "g.json"), path(&d, "sp.json"));
    assert_eq!(code(&run(&["gen-split", "--n", "2", "-o", s(&sys)])), 0);
    let field = Field::default().tag();
    let accept_all = format!(
        r#"{{"field": "{field}", "z": ["z_1_1_2"], "entries": [["1", "1"]], "target": "1"}}"#
    );
    fs::write(&sp, accept_all).unwrap();
    let o = run(&["check-interpolant", s(&sp), s(&sys)]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("accepts but P0 is satisfiable"));
}

#[test]
fn lift_and_restrict_round_trip() {
    let d = TempDir::new().unwrap();
    let (phi, psi, psys, pcert, out) = (
        path(&d, "phi.cnf"),
        path(&d, "psi.cnf"),
        path(&d, "psi.json"),
        path(&d, "psi_cert.json"),
        path(&d, "phi_cert.json"),
    );
    fs::write(&phi, ALL_SIGNS).unwrap();
    let idx = path(&d, "idx.json");
    assert_eq!(
        code(&run(&["lift", s(&phi), "--index", s(&idx), "-o", s(&psi)])),
        0
    );
    let index: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&idx).unwrap()).unwrap();
    assert_eq!(index["selectors"].as_array().unwrap().len(), 48);
    assert_eq!(code(&run(&["translate", s(&psi), "-o", s(&psys)])), 0);
    assert_eq!(
        code(&run(&["ns-solve", s(&psys), "--search", "-o", s(&pcert)])),
        0
    );
    assert_eq!(code(&run(&["verify", s(&pcert), "--mode", "exact"])), 0);
    assert_eq!(
        code(&run(&[
            "restrict",
            s(&phi),
            "--certificate",
            s(&pcert),
            "-o",
            s(&out)
        ])),
        0
    );
    let o = run(&["verify", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("valid"));

    let o = run(&["--order", "v2,v3,v1", "restrict", s(&phi)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("p cnf 3 8"));
    assert_eq!(code(&run(&["restrict", s(&phi)])), 2);
}

#[test]
fn tseitin_and_fphp_builders() {
    let d = TempDir::new().unwrap();
    let (c, cnf) = (path(&d, "t.json"), path(&d, "t.cnf"));
    let o = run(&[
        "build-tseitin",
        "--cycle",
        "5",
        "--cnf",
        s(&cnf),
        "-o",
        s(&c),
    ]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(&cnf).unwrap().contains("p cnf 5 10"));
    assert_eq!(code(&run(&["verify", s(&c)])), 0);
    let g = path(&d, "k4.txt");
    fs::write(&g, "# K4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\ncharge 1 0 0 0\n").unwrap();
    assert_eq!(
        code(&run(&[
            "--order",
            "e6,e5,e4,e3,e2,e1",
            "build-tseitin",
            s(&g),
            "-o",
            s(&c)
        ])),
        0
    );
    assert_eq!(code(&run(&["verify", s(&c)])), 0);
    fs::write(&g, "0 1\n1 2\n2 0\ncharge 1 1 0\n").unwrap();
    assert_eq!(code(&run(&["build-tseitin", s(&g)])), 1);
    assert_eq!(
        code(&run(&["--field", "2", "build-tseitin", "--cycle", "3"])),
        1
    );

    let f = path(&d, "f.json");
    assert_eq!(code(&run(&["build-fphp", "--n", "2", "-o", s(&f)])), 0);
    assert_eq!(code(&run(&["verify", s(&f)])), 0);
    assert_eq!(code(&run(&["--field", "3", "build-fphp", "--n", "2"])), 1);
}

#[test]
fn outputs_are_deterministic() {
    let d = TempDir::new().unwrap();
    let phi = path(&d, "phi.cnf");
    fs::write(&phi, ALL_SIGNS).unwrap();
    for args in [
        vec!["build-fphp", "--n", "3"],
        vec!["build-tseitin", "--complete", "4"],
        vec!["gen-split", "--n", "3"],
        vec!["lift", s(&phi)],
        vec!["simulate-pc", s(&phi)],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn field_from_environment() {
    let o = bin()
        .env("IPS_FIELD", "rational")
        .args(["build-fphp", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["field"], "rational");
}

#[test]
fn pc_simulation_and_proof_files() {
    let d = TempDir::new().unwrap();
    let (cnf, proof, cert) = (path(&d, "a.cnf"), path(&d, "p.json"), path(&d, "c.json"));
    fs::write(&cnf, ALL_SIGNS).unwrap();
    let o = run(&[
        "simulate-pc",
        s(&cnf),
        "--emit-proof",
        s(&proof),
        "-o",
        s(&cert),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["verify", s(&cert)])), 0);
    assert_eq!(
        code(&run(&["simulate-pc", s(&cnf), "--proof", s(&proof)])),
        0
    );

    fs::write(&cnf, CONTRADICTION).unwrap();
    let reuse = r#"{"lines": [
        {"poly": "-x1 + 1", "rule": {"axiom": 0}},
        {"poly": "-2*x1 + 2", "rule": {"lin_comb": [0, 0, "1", "1"]}}
    ]}"#;
    fs::write(&proof, reuse).unwrap();
    assert_eq!(
        code(&run(&["simulate-pc", s(&cnf), "--proof", s(&proof)])),
        1
    );
    fs::write(&cnf, "p cnf 2 1\n1 2 0\n").unwrap();
    assert_eq!(code(&run(&["simulate-pc", s(&cnf)])), 1);
}

#[test]
fn normal_form_commands() {
    let d = TempDir::new().unwrap();
    let (sys, nf) = (path(&d, "g.json"), path(&d, "gn.json"));
    assert_eq!(code(&run(&["gen-split", "--n", "2", "-o", s(&sys)])), 0);
    assert_eq!(
        code(&run(&[
            "normal-form",
            s(&sys),
            "--mode",
            "monotone",
            "-o",
            s(&nf)
        ])),
        0
    );
    let good = path(&d, "good.json");
    fs::write(&good, worked_certificate(None)).unwrap();
    let out = path(&d, "n.json");
    let o = run(&[
        "normal-form",
        s(&good),
        "--certificate",
        "--mode",
        "nonmonotone",
        "-o",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&run(&["verify", s(&out)])), 0);
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    let text = stdout(&o);
    assert_eq!(code(&o), 0, "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}
