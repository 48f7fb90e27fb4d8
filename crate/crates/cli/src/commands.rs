use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use roabp_ips::acceptance::run_all;
use roabp_ips::algebra::{PolyRing, Var};
use roabp_ips::certificate::{
    decision_tree, find_ns_refutation, refute_by_search, CertificateFile, LinearIpsCertificate,
    VerifyMode, DEFAULT_TREE_NODES,
};
use roabp_ips::formulas::{
    emit_dimacs, parse_dimacs, translate_cnf, translate_with_roles, Cnf, Part, PolySystem, Role,
    SystemFile,
};
use roabp_ips::instances::{
    apply_restriction_to_certificate, gen_split_formula, lift, restriction_for_order,
};
use roabp_ips::interpolate::{check_interpolant_with_budget, interpolate, Direction};
use roabp_ips::normalform::{apply_normal_form, default_order, to_znormal, NormalMode};
use roabp_ips::spanprog::{assignment, SpanProgram, SpanProgramFile};
use roabp_ips::upperbounds::{
    fphp, pc_from_decision_tree, refute_fphp, refute_tseitin, simulate_treelike_pc, TseitinInstance,
};

use crate::args::{Check, Command, Mode, Output, RoleArg};
use crate::config::Config;
use crate::error::CliError;
use crate::proof;

type Res = Result<(), CliError>;

macro_rules! out {
    ($($t:tt)*) => {
        say(&format!($($t)*))
    };
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Res {
    fs::write(path, ensure_newline(text))
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn ensure_newline(text: &str) -> String {
    if text.ends_with('\n') {
        text.to_string()
    } else {
        format!("{text}\n")
    }
}

/// Writes to standard output; a closed pipe ends output quietly.
fn say(text: &str) {
    let mut stdout = io::stdout().lock();
    if stdout.write_all(ensure_newline(text).as_bytes()).is_err() {
        std::process::exit(0);
    }
}

fn emit(out: &Output, text: &str) -> Res {
    match &out.output {
        Some(p) => write(p, text),
        None => {
            say(text);
            Ok(())
        }
    }
}

fn mode(m: Mode) -> NormalMode {
    match m {
        Mode::Nonmonotone => NormalMode::Nonmonotone,
        Mode::Monotone => NormalMode::Monotone,
    }
}

fn load_cnf(ring: &PolyRing, path: &Path, prefix: &str) -> Result<Cnf, CliError> {
    let parsed = parse_dimacs(ring, &read(path)?, prefix)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.cnf)
}

fn load_system(cfg: &Config, path: &Path) -> Result<PolySystem, CliError> {
    let file: SystemFile = serde_json::from_str(&read(path)?)?;
    let ring = cfg.ring_for(&file.field)?;
    Ok(PolySystem::from_file(&ring, &file)?)
}

fn certificate_file(path: &Path) -> Result<CertificateFile, CliError> {
    Ok(serde_json::from_str(&read(path)?)?)
}

fn load_certificate(cfg: &Config, path: &Path) -> Result<LinearIpsCertificate, CliError> {
    let file = certificate_file(path)?;
    let ring = cfg.ring_for(&file.field)?;
    Ok(LinearIpsCertificate::from_file(&ring, &file)?)
}

fn load_span(ring: &PolyRing, path: &Path) -> Result<SpanProgram, CliError> {
    let file: SpanProgramFile = serde_json::from_str(&read(path)?)?;
    Ok(SpanProgram::from_file(ring, &file)?)
}

pub fn run(cfg: &Config, cmd: Command) -> Res {
    match cmd {
        Command::Translate {
            input,
            prefix,
            role,
            out,
        } => {
            let ring = cfg.ring();
            let cnf = load_cnf(&ring, &input, &prefix)?;
            let role = match role {
                RoleArg::X => Role::X,
                RoleArg::Y => Role::Y,
                RoleArg::Z => Role::Z,
            };
            let s = translate_with_roles(&cnf, |_| role, Part::Untagged);
            eprintln!(
                "{} polynomials over {} variables",
                s.len(),
                cnf.vars().len()
            );
            emit(&out, &s.to_json())
        }
        Command::GenSplit { n, out } => {
            let split = gen_split_formula(&cfg.ring(), n)?;
            eprintln!(
                "GEN_{n}: |x|={} |y|={} |z|={}",
                split.x.len(),
                split.y.len(),
                split.z.len()
            );
            emit(&out, &split.system()?.to_json())
        }
        Command::Lift { input, index, out } => {
            let ring = cfg.ring();
            let l = lift(&load_cnf(&ring, &input, "x")?)?;
            if let Some(p) = index {
                write(&p, &l.index_json())?;
            }
            let psi = l.psi();
            eprintln!(
                "{} selectors, {} variables, {} clauses",
                l.selectors.len(),
                psi.vars().len(),
                psi.clauses().len()
            );
            emit(&out, &emit_dimacs(&psi, "x"))
        }
        Command::Restrict {
            input,
            certificate,
            out,
        } => restrict(cfg, &input, certificate.as_deref(), &out),
        Command::Verify {
            certificate,
            mode,
            trials,
        } => {
            let c = load_certificate(cfg, &certificate)?;
            let m = match mode {
                Check::Expand => VerifyMode::Expand {
                    budget: cfg.expansion_budget,
                },
                Check::Randomized => VerifyMode::Randomized {
                    trials,
                    seed: cfg.seed,
                },
                Check::Exact => VerifyMode::Exact,
            };
            let rep = c.verify(m)?;
            say(&rep.summary());
            if let Some(b) = rep.error_bound.filter(|b| *b > 0.0) {
                out!("error probability <= {b:e}");
            }
            if rep.valid {
                Ok(())
            } else {
                Err(CliError::Invalid(rep.detail))
            }
        }
        Command::NsSolve {
            system,
            degree,
            search,
            out,
        } => {
            let s = load_system(cfg, &system)?;
            let order = cfg.order_in(s.ring())?.unwrap_or_else(|| default_order(&s));
            let found = if search {
                refute_by_search(&s, &order)?
            } else {
                let mut found = None;
                for d in 0..=degree {
                    if let Some(c) = find_ns_refutation(&s, d, &order)? {
                        eprintln!("refutation at degree {d}");
                        found = Some(c);
                        break;
                    }
                }
                found
            };
            let c = found.ok_or_else(|| CliError::Invalid("no refutation found".into()))?;
            eprintln!("width {}", c.width());
            emit(&out, &c.to_json())
        }
        Command::NormalForm {
            input,
            mode: m,
            certificate,
            out,
        } => {
            if certificate {
                let c = load_certificate(cfg, &input)?;
                let n = apply_normal_form(&c, mode(m))?;
                eprintln!("width {} (bound {})", n.certificate.width(), n.width_bound);
                emit(&out, &n.certificate.to_json())
            } else {
                let s = load_system(cfg, &input)?;
                let order = cfg.order_in(s.ring())?;
                let nf = to_znormal(&s, mode(m), order.as_deref())?;
                eprintln!(
                    "{} auxiliary variables; derivation width at most {}",
                    nf.w_vars.len(),
                    nf.derivation_widths().into_iter().max().unwrap_or(0)
                );
                emit(&out, &nf.normalized.to_json())
            }
        }
        Command::ExtractInterpolant {
            certificate,
            mode: m,
            normalized,
            out,
        } => {
            let c = load_certificate(cfg, &certificate)?;
            let (n, ex) = interpolate(&c, mode(m))?;
            if let Some(p) = normalized {
                write(&p, &n.certificate.to_json())?;
            }
            eprintln!(
                "size {} ({} before pruning, bound {}), cut after {} layers",
                ex.program.size(),
                ex.raw_size,
                ex.size_bound,
                ex.cut_index
            );
            emit(&out, &ex.program.to_json())
        }
        Command::CheckInterpolant { program, system } => {
            let s = load_system(cfg, &system)?;
            let sp = load_span(s.ring(), &program)?;
            let chk = check_interpolant_with_budget(&sp, &s, cfg.enumeration_budget)?;
            if chk.ok {
                out!("interpolant on all {} assignments", chk.assignments);
                return Ok(());
            }
            for (alpha, dir) in &chk.failures {
                let why = match dir {
                    Direction::AcceptsSatisfiableP0 => "accepts but P0 is satisfiable",
                    Direction::RejectsSatisfiableP1 => "rejects but P1 is satisfiable",
                };
                out!("{}: {why}", show_assignment(s.ring(), &sp.z, alpha));
            }
            Err(CliError::Invalid(format!(
                "{} of {} assignments fail",
                chk.failures.len(),
                chk.assignments
            )))
        }
        Command::EvalSpan { program, assign } => {
            let file: SpanProgramFile = serde_json::from_str(&read(&program)?)?;
            let ring = cfg.ring_for(&file.field)?;
            let sp = SpanProgram::from_file(&ring, &file)?;
            match assign {
                Some(text) => {
                    let alpha = parse_assignment(&ring, &text)?;
                    let v = sp.span_eval(&alpha)?;
                    say(if v { "accept" } else { "reject" });
                }
                None => {
                    for (m, v) in sp.truth_table()?.into_iter().enumerate() {
                        let alpha = assignment(&sp.z, m as u64);
                        out!("{} -> {}", show_assignment(&ring, &sp.z, &alpha), v as u8);
                    }
                }
            }
            Ok(())
        }
        Command::BuildTseitin {
            graph,
            cycle,
            complete,
            cnf,
            out,
        } => {
            let t = match (graph, cycle, complete) {
                (Some(p), None, None) => TseitinInstance::parse(&read(&p)?)?,
                (None, Some(n), None) => TseitinInstance::cycle(n),
                (None, None, Some(n)) => TseitinInstance::complete(n),
                _ => {
                    return Err(CliError::Usage(
                        "give a graph file, --cycle or --complete".into(),
                    ))
                }
            };
            let ring = cfg.ring();
            let (f, _, _) = t.formula(&ring)?;
            if let Some(p) = cnf {
                write(&p, &emit_dimacs(&f, "e"))?;
            }
            let order = cfg.order_in(&ring)?;
            let r = refute_tseitin(&t, &ring, order.as_deref())?;
            eprintln!(
                "|E|={} width {} (bound {})",
                t.edges.len(),
                r.certificate.width(),
                r.width_bound
            );
            emit(&out, &r.certificate.to_json())
        }
        Command::BuildFphp { n, cnf, out } => {
            let ring = cfg.ring();
            let r = refute_fphp(&ring, n)?;
            if let Some(p) = cnf {
                let (f, _) = fphp(&ring, n)?;
                write(&p, &emit_dimacs(&f, "x"))?;
            }
            eprintln!(
                "width {} (bound {}), g width {} then {}",
                r.certificate.width(),
                r.width_bound,
                r.g_width.0,
                r.g_width.1
            );
            emit(&out, &r.certificate.to_json())
        }
        Command::SimulatePc {
            input,
            proof: proof_path,
            emit_proof,
            out,
        } => {
            let ring = cfg.ring();
            let f = load_cnf(&ring, &input, "x")?;
            let s = translate_cnf(&f);
            let p = match proof_path {
                Some(path) => proof::from_file(&ring, &serde_json::from_str(&read(&path)?)?)?,
                None => {
                    let tree = decision_tree(&s, DEFAULT_TREE_NODES)?
                        .ok_or_else(|| CliError::Invalid("formula is satisfiable".into()))?;
                    pc_from_decision_tree(&s, &tree)?
                }
            };
            if let Some(path) = emit_proof {
                let text = serde_json::to_string_pretty(&proof::to_file(&ring, &p))?;
                write(&path, &text)?;
            }
            let order = cfg.order_in(&ring)?.unwrap_or_else(|| f.vars().to_vec());
            let sim = simulate_treelike_pc(&p, &s, &order)?;
            eprintln!(
                "{} lines, axiom width {}, width {} (bound {})",
                p.len(),
                sim.axiom_width,
                sim.certificate.width(),
                sim.bound()
            );
            emit(&out, &sim.certificate.to_json())
        }
        Command::Selftest => {
            let results = run_all(cfg.seed);
            for r in &results {
                out!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed == 0 {
                Ok(())
            } else {
                Err(CliError::Invalid(format!("{failed} criteria failed")))
            }
        }
    }
}

fn restrict(cfg: &Config, input: &Path, certificate: Option<&Path>, out: &Output) -> Res {
    let cert_file = certificate.map(certificate_file).transpose()?;
    let ring = match &cert_file {
        Some(f) => cfg.ring_for(&f.field)?,
        None => cfg.ring(),
    };
    let l = lift(&load_cnf(&ring, input, "x")?)?;
    let cert = cert_file
        .map(|f| LinearIpsCertificate::from_file(&ring, &f))
        .transpose()?;
    let order = match &cert {
        Some(c) => c.order.clone(),
        None => cfg
            .order_in(&ring)?
            .ok_or_else(|| CliError::Usage("restrict needs --order or --certificate".into()))?,
    };
    let rho = restriction_for_order(&l, &order)?;
    for k in &rho.chosen {
        eprintln!("selector {}", ring.name(l.selectors[*k].var));
    }
    match cert {
        Some(c) => {
            let mapped = apply_restriction_to_certificate(&c, &l, &rho)?;
            eprintln!("width {} (was {})", mapped.width(), c.width());
            emit(out, &mapped.to_json())
        }
        None => emit(out, &emit_dimacs(&rho.restrict_cnf(&l.psi())?, "x")),
    }
}

fn parse_assignment(ring: &PolyRing, text: &str) -> Result<HashMap<Var, bool>, CliError> {
    let mut out = HashMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected name=0|1, got `{part}`")))?;
        let v = ring
            .lookup(name.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown variable `{name}`")))?;
        let b = match value.trim() {
            "0" | "false" => false,
            "1" | "true" => true,
            other => return Err(CliError::Usage(format!("bad value `{other}`"))),
        };
        out.insert(v, b);
    }
    Ok(out)
}

fn show_assignment(ring: &PolyRing, zs: &[Var], alpha: &HashMap<Var, bool>) -> String {
    zs.iter()
        .map(|z| format!("{}={}", ring.name(*z), alpha[z] as u8))
        .collect::<Vec<_>>()
        .join(" ")
}
