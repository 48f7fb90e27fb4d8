//! Span-program interpolants from refutations whose order lists the
//! x-variables first, and an exhaustive interpolant checker.
//!
//! Cutting each P0 coefficient after the last x-variable writes it as
//! `sum_i a_i(x) r_i(y, z)`. A P0 polynomial `p' + z_j p''` then contributes
//! `(z_j, a_i (p' + p''))` and `(~z_j, a_i p')`, a z-free one contributes
//! `(1, a_i p)`, and the target is 1.

use std::collections::HashMap;

use crate::algebra::{SparsePoly, Var};
use crate::certificate::{LinearIpsCertificate, VerifyMode, VerifyReport};
use crate::error::{Error, Result};
use crate::formulas::{brute_force_sat, Part, PolySystem, Role};
use crate::normalform::{apply_normal_form, NormalMode, NormalizedRefutation};
use crate::roabp::{Roabp, DEFAULT_EXPANSION_BUDGET};
use crate::spanprog::{assignment, Label, SpanProgram};

/// Default cap on the number of z-variables the checker enumerates.
pub const DEFAULT_Z_BUDGET: usize = 16;

/// The variable partition, read from system roles. Auxiliary `w` variables
/// count as x-variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSpec {
    pub x: Vec<Var>,
    pub y: Vec<Var>,
    pub z: Vec<Var>,
    /// Normal form that P0 must satisfy; `Monotone` also rejects negative
    /// entries.
    pub mode: NormalMode,
}

impl SplitSpec {
    pub fn from_system(s: &PolySystem, mode: NormalMode) -> SplitSpec {
        let mut x = s.vars_with_role(Role::X);
        x.extend(s.vars_with_role(Role::AuxW));
        SplitSpec {
            x,
            y: s.vars_with_role(Role::Y),
            z: s.vars_with_role(Role::Z),
            mode,
        }
    }

    /// Number of leading x-variables; errors if an x-variable appears after
    /// a y- or z-variable.
    pub fn cut_position(&self, order: &[Var]) -> Result<usize> {
        let t = order.iter().take_while(|v| self.x.contains(v)).count();
        if let Some(v) = order[t..].iter().find(|v| self.x.contains(v)) {
            return Err(Error::OrderMismatch(format!(
                "x-variable at position {} follows a y or z variable",
                order.iter().position(|u| u == v).unwrap_or(0)
            )));
        }
        Ok(t)
    }
}

/// Extracted program with bookkeeping for witness reconstruction.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub program: SpanProgram,
    /// For each surviving entry, the system index of its P0 polynomial and
    /// the prefix index `i`.
    pub provenance: Vec<(usize, usize)>,
    /// Entry count before zero vectors were pruned.
    pub raw_size: usize,
    /// `2 * width * |P0|`.
    pub size_bound: usize,
    pub cut_index: usize,
    prefixes: HashMap<usize, Vec<SparsePoly>>,
}

enum Shape {
    Free,
    Linear {
        z: Var,
        p0: SparsePoly,
        p1: SparsePoly,
    },
}

fn shape(s: &PolySystem, spec: &SplitSpec, p: &SparsePoly) -> Result<Shape> {
    let vars = p.variables();
    if let Some(v) = vars.iter().find(|v| spec.y.contains(v)) {
        return Err(Error::Shape(format!(
            "P0 polynomial `{p}` mentions y-variable {}",
            s.ring().name(*v)
        )));
    }
    let zs: Vec<Var> = vars.into_iter().filter(|v| spec.z.contains(v)).collect();
    match zs.as_slice() {
        [] => Ok(Shape::Free),
        [z] if p.degree_in(*z) == 1 => Ok(Shape::Linear {
            z: *z,
            p0: p.coefficient_of_power(*z, 0),
            p1: p.coefficient_of_power(*z, 1),
        }),
        _ => Err(Error::Shape(format!(
            "P0 polynomial `{p}` is not in z-normal form"
        ))),
    }
}

pub fn extract_span_program(c: &LinearIpsCertificate, spec: &SplitSpec) -> Result<Extraction> {
    extract_with_budget(c, spec, DEFAULT_EXPANSION_BUDGET)
}

/// As [`extract_span_program`], with an explicit term budget for expanding
/// the prefix polynomials.
pub fn extract_with_budget(
    c: &LinearIpsCertificate,
    spec: &SplitSpec,
    budget: usize,
) -> Result<Extraction> {
    let ring = c.ring();
    let t = spec.cut_position(&c.order)?;
    let mut program = SpanProgram::new(ring, spec.z.clone(), SparsePoly::one(ring));
    let mut provenance = Vec::new();
    let mut prefixes = HashMap::new();
    let mut raw_size = 0;
    let mut p0 = 0;
    for (k, e) in c.system.part(Part::P0) {
        p0 += 1;
        let sh = shape(&c.system, spec, &e.poly)?;
        if let (NormalMode::Monotone, Shape::Linear { p0, .. }) = (spec.mode, &sh) {
            if !p0.is_zero() {
                return Err(Error::Shape(format!(
                    "P0 polynomial `{}` is not in monotone z-normal form",
                    e.poly
                )));
            }
        }
        let cut = c.coefficients[k].split_at(t, budget)?;
        for (i, a) in cut.prefix.iter().enumerate() {
            let mut emit = |label: Label, v: SparsePoly| -> Result<()> {
                raw_size += 1;
                if !v.is_zero() {
                    program.push(label, v)?;
                    provenance.push((k, i));
                }
                Ok(())
            };
            match &sh {
                Shape::Free => emit(Label::One, a * &e.poly)?,
                Shape::Linear { z, p0, p1 } => {
                    emit(Label::Pos(*z), a * &(p0 + p1))?;
                    if spec.mode == NormalMode::Nonmonotone {
                        emit(Label::Neg(*z), a * p0)?;
                    }
                }
            }
        }
        prefixes.insert(k, cut.prefix);
    }
    Ok(Extraction {
        program,
        provenance,
        raw_size,
        size_bound: 2 * c.width() * p0,
        cut_index: t,
        prefixes,
    })
}

/// Normalises P0 first when it is not already in the required form, then
/// extracts.
pub fn interpolate(
    c: &LinearIpsCertificate,
    mode: NormalMode,
) -> Result<(NormalizedRefutation, Extraction)> {
    let n = apply_normal_form(c, mode)?;
    let spec = SplitSpec::from_system(&n.certificate.system, mode);
    let ex = extract_span_program(&n.certificate, &spec)?;
    Ok((n, ex))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The program accepts but `P0(x, alpha)` is satisfiable.
    AcceptsSatisfiableP0,
    /// The program rejects but `P1(y, alpha)` is satisfiable.
    RejectsSatisfiableP1,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterpolantCheck {
    pub ok: bool,
    /// First violation in counting order.
    pub counterexample: Option<(HashMap<Var, bool>, Direction)>,
    pub failures: Vec<(HashMap<Var, bool>, Direction)>,
    pub assignments: usize,
}

pub fn check_interpolant(sp: &SpanProgram, s: &PolySystem) -> Result<InterpolantCheck> {
    check_interpolant_with_budget(sp, s, DEFAULT_Z_BUDGET)
}

/// Checks the interpolant conditions on every z-assignment. The whole system
/// must be unsatisfiable.
pub fn check_interpolant_with_budget(
    sp: &SpanProgram,
    s: &PolySystem,
    z_budget: usize,
) -> Result<InterpolantCheck> {
    let mut zs = s.vars_with_role(Role::Z);
    for v in &sp.z {
        if !zs.contains(v) {
            zs.push(*v);
        }
    }
    if zs.len() > z_budget {
        return Err(Error::EnumerationBudget {
            needed: zs.len(),
            budget: z_budget,
        });
    }
    if brute_force_sat(s, None)?.sat {
        return Err(Error::Satisfiable);
    }
    let p0 = s.restrict_to(&[Part::P0]);
    let p1 = s.restrict_to(&[Part::P1]);
    let mut failures = Vec::new();
    for m in 0..1u64 << zs.len() {
        let alpha = assignment(&zs, m);
        let bad = if sp.span_eval(&alpha)? {
            brute_force_sat(&p0, Some(&alpha))?
                .sat
                .then_some(Direction::AcceptsSatisfiableP0)
        } else {
            brute_force_sat(&p1, Some(&alpha))?
                .sat
                .then_some(Direction::RejectsSatisfiableP1)
        };
        if let Some(d) = bad {
            failures.push((alpha, d));
        }
    }
    Ok(InterpolantCheck {
        ok: failures.is_empty(),
        counterexample: failures.first().cloned(),
        failures,
        assignments: 1 << zs.len(),
    })
}

/// The system `P0(x, alpha)`: P0 with the z-variables fixed.
pub fn specialize_p0(s: &PolySystem, alpha: &HashMap<Var, bool>) -> Result<PolySystem> {
    let field = s.field();
    let fixed = alpha
        .iter()
        .map(|(v, b)| (*v, if *b { field.one() } else { field.zero() }))
        .collect();
    let mut out = PolySystem::new(s.ring());
    for (v, r) in s.roles() {
        if matches!(r, Role::X | Role::AuxW | Role::AuxField) {
            out.set_role(*v, *r)?;
        }
    }
    for (_, e) in s.part(Part::P0) {
        out.push(e.poly.substitute_constants(&fixed), e.kind, Part::P0)?;
    }
    Ok(out)
}

/// When the program accepts at `alpha`, turns the span combination into a
/// Nullstellensatz refutation of `P0(x, alpha)` and verifies it.
pub fn positive_witness(
    ex: &Extraction,
    c: &LinearIpsCertificate,
    alpha: &HashMap<Var, bool>,
) -> Result<Option<(LinearIpsCertificate, VerifyReport)>> {
    let ring = c.ring();
    let ev = ex.program.span_eval_with_witness(alpha)?;
    let Some(comb) = ev.combination.filter(|_| ev.value) else {
        return Ok(None);
    };
    let mut coeff: HashMap<usize, SparsePoly> = HashMap::new();
    for (k, lambda) in comb {
        let (axiom, i) = ex.provenance[k];
        let term = ex.prefixes[&axiom][i].scale(&lambda);
        let slot = coeff.entry(axiom).or_insert_with(|| SparsePoly::zero(ring));
        *slot = &*slot + &term;
    }
    let spec = specialize_p0(&c.system, alpha)?;
    let order = c.order[..ex.cut_index].to_vec();
    let coefficients = c
        .system
        .part(Part::P0)
        .map(|(k, _)| match coeff.get(&k) {
            Some(q) => Roabp::from_sparse(q, &order),
            None => Ok(Roabp::zero(ring, &order)),
        })
        .collect::<Result<Vec<_>>>()?;
    let cert = LinearIpsCertificate::refutation(spec, order, coefficients)?;
    let rep = cert.verify(VerifyMode::default())?;
    Ok(Some((cert, rep)))
}

#[cfg(test)]
mod tests;
