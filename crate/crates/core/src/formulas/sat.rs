//! Satisfiability oracles: exhaustive enumeration with exact linear solving
//! for field-valued variables, and a complete DPLL search used when every
//! axiom is a clause translation.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::cnf::{Clause, Cnf, Literal};
use super::system::{translate_clause, Kind, PolySystem};
use crate::algebra::{FieldElement, SparsePoly, Var};
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_BUDGET: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    pub sat: bool,
    /// Values for every mentioned non-fixed variable when satisfiable.
    pub witness: Option<HashMap<Var, FieldElement>>,
}

impl SatResult {
    fn unsat() -> SatResult {
        SatResult {
            sat: false,
            witness: None,
        }
    }
}

/// Decides whether the system has a common root with Boolean values for the
/// Boolean-role variables and field values for the rest, after fixing the
/// variables in `alpha`.
pub fn brute_force_sat(s: &PolySystem, alpha: Option<&HashMap<Var, bool>>) -> Result<SatResult> {
    brute_force_sat_with_budget(s, alpha, DEFAULT_ENUMERATION_BUDGET)
}

pub fn brute_force_sat_with_budget(
    s: &PolySystem,
    alpha: Option<&HashMap<Var, bool>>,
    budget: usize,
) -> Result<SatResult> {
    let field = s.field();
    let empty = HashMap::new();
    let alpha = alpha.unwrap_or(&empty);
    let fixed: HashMap<Var, FieldElement> = alpha
        .iter()
        .map(|(v, b)| (*v, if *b { field.one() } else { field.zero() }))
        .collect();
    let mut polys: Vec<SparsePoly> = Vec::new();
    for e in s.entries() {
        // Boolean axioms vanish on every enumerated point.
        if e.kind == Kind::Boolean {
            continue;
        }
        let p = e.poly.substitute_constants(&fixed);
        if p.is_zero() {
            continue;
        }
        if p.is_constant() {
            return Ok(SatResult::unsat());
        }
        polys.push(p);
    }
    let is_bool = |v: &Var| s.role(*v).map(|r| r.is_boolean()).unwrap_or(false);
    let mentioned: BTreeSet<Var> = polys.iter().flat_map(|p| p.variables()).collect();
    let bools: Vec<Var> = mentioned.iter().copied().filter(is_bool).collect();
    let aux: Vec<Var> = mentioned.iter().copied().filter(|v| !is_bool(v)).collect();

    if aux.is_empty() {
        if let Some(clauses) = polys.iter().map(as_clause).collect::<Option<Vec<Clause>>>() {
            let mut cnf = Cnf::with_vars(s.ring(), bools.clone());
            for c in clauses {
                cnf.push(c);
            }
            return Ok(match dpll(&cnf, &HashMap::new()) {
                None => SatResult::unsat(),
                Some(a) => SatResult {
                    sat: true,
                    witness: Some(
                        bools
                            .iter()
                            .map(|v| (*v, if a[v] { field.one() } else { field.zero() }))
                            .collect(),
                    ),
                },
            });
        }
    }

    if bools.len() > budget {
        return Err(Error::EnumerationBudget {
            needed: bools.len(),
            budget,
        });
    }
    let (plain, with_aux): (Vec<SparsePoly>, Vec<SparsePoly>) = polys
        .into_iter()
        .partition(|p| p.variables().iter().all(is_bool));
    let index: HashMap<Var, usize> = bools.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    for mask in 0u64..(1u64 << bools.len()) {
        let value = |v: Var| {
            if mask >> index[&v] & 1 == 1 {
                field.one()
            } else {
                field.zero()
            }
        };
        if plain.iter().any(|p| !p.eval(value).is_zero()) {
            continue;
        }
        let point: HashMap<Var, FieldElement> = bools.iter().map(|v| (*v, value(*v))).collect();
        let residual: Vec<SparsePoly> = with_aux
            .iter()
            .map(|p| p.substitute_constants(&point))
            .collect();
        if let Some(sol) = solve_aux(residual, &aux, s)? {
            let mut w = point;
            w.extend(sol);
            return Ok(SatResult {
                sat: true,
                witness: Some(w),
            });
        }
    }
    Ok(SatResult::unsat())
}

/// Solves polynomials in field-valued variables by repeatedly eliminating a
/// variable from an affine equation. Fails when only nonlinear equations
/// remain.
fn solve_aux(
    mut polys: Vec<SparsePoly>,
    aux: &[Var],
    s: &PolySystem,
) -> Result<Option<HashMap<Var, FieldElement>>> {
    let ring = s.ring();
    let field = s.field();
    let mut steps: Vec<(Var, SparsePoly)> = Vec::new();
    loop {
        polys.retain(|p| !p.is_zero());
        if polys.iter().any(|p| p.is_constant()) {
            return Ok(None);
        }
        if polys.is_empty() {
            break;
        }
        let Some(k) = polys.iter().position(|p| p.degree() == 1) else {
            let v = polys[0]
                .variables()
                .into_iter()
                .next()
                .expect("nonconstant");
            return Err(Error::NonlinearAuxiliary(ring.name(v)));
        };
        let p = polys.swap_remove(k);
        let (m, c) = p
            .leading()
            .map(|(m, c)| (m.clone(), c.clone()))
            .expect("nonzero");
        let v = m.vars().next().expect("degree one");
        let rest = &p - &SparsePoly::term(ring, c.clone(), m);
        let expr = rest.scale(&-&c.inv().expect("nonzero"));
        let map = HashMap::from([(v, expr.clone())]);
        for q in polys.iter_mut() {
            if q.mentions(v) {
                *q = q.substitute(&map);
            }
        }
        steps.push((v, expr));
    }
    let mut sol: HashMap<Var, FieldElement> = aux.iter().map(|v| (*v, field.zero())).collect();
    for (v, expr) in steps.into_iter().rev() {
        let val = expr.eval(|u| sol.get(&u).cloned().unwrap_or_else(|| field.zero()));
        sol.insert(v, val);
    }
    Ok(Some(sol))
}

/// Recognises a nonzero multiple of a clause translation.
pub fn as_clause(p: &SparsePoly) -> Option<Clause> {
    let (m0, c) = p.terms().next()?;
    if p.is_constant() || m0.factors().iter().any(|(_, e)| *e != 1) {
        return None;
    }
    let neg: HashSet<Var> = m0.vars().collect();
    let lits: Vec<Literal> = p
        .variables()
        .into_iter()
        .map(|v| Literal {
            var: v,
            positive: !neg.contains(&v),
        })
        .collect();
    let clause = Clause::new(lits).ok()?;
    (translate_clause(p.ring(), &clause).scale(c) == *p).then_some(clause)
}

/// Complete DPLL search with unit propagation. Declared but unconstrained
/// variables are set to false in the returned model.
pub fn dpll(cnf: &Cnf, fixed: &HashMap<Var, bool>) -> Option<HashMap<Var, bool>> {
    let mut vars: Vec<Var> = cnf.vars().to_vec();
    for v in cnf.mentioned() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let index: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let clauses: Vec<Vec<(usize, bool)>> = cnf
        .clauses()
        .iter()
        .map(|c| {
            c.literals()
                .iter()
                .map(|l| (index[&l.var], l.positive))
                .collect()
        })
        .collect();
    let mut assign: Vec<Option<bool>> = vec![None; vars.len()];
    for (v, b) in fixed {
        if let Some(&i) = index.get(v) {
            assign[i] = Some(*b);
        }
    }
    if !search(&clauses, &mut assign) {
        return None;
    }
    Some(
        vars.iter()
            .enumerate()
            .map(|(i, v)| (*v, assign[i].unwrap_or(false)))
            .collect(),
    )
}

fn search(clauses: &[Vec<(usize, bool)>], assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail: Vec<usize> = Vec::new();
    loop {
        let mut unit: Option<(usize, bool)> = None;
        let mut branch: Option<(usize, bool, usize)> = None;
        let mut all_sat = true;
        for c in clauses {
            let mut open = 0;
            let mut last = None;
            let mut sat = false;
            for &(v, pos) in c {
                match assign[v] {
                    Some(b) if b == pos => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        last = Some((v, pos));
                    }
                }
            }
            if sat {
                continue;
            }
            all_sat = false;
            match open {
                0 => {
                    for v in trail {
                        assign[v] = None;
                    }
                    return false;
                }
                1 => {
                    unit = last;
                    break;
                }
                _ => {
                    if branch.map(|(_, _, k)| open < k).unwrap_or(true) {
                        let (v, pos) = last.expect("open literal");
                        branch = Some((v, pos, open));
                    }
                }
            }
        }
        if all_sat {
            return true;
        }
        if let Some((v, pos)) = unit {
            assign[v] = Some(pos);
            trail.push(v);
            continue;
        }
        let (v, pos, _) = branch.expect("an open clause");
        for b in [pos, !pos] {
            assign[v] = Some(b);
            if search(clauses, assign) {
                return true;
            }
        }
        assign[v] = None;
        for v in trail {
            assign[v] = None;
        }
        return false;
    }
}

/// Satisfying assignments of a CNF by full enumeration over its declared
/// variables; used as an independent oracle in tests.
pub fn enumerate_models(cnf: &Cnf) -> Vec<HashMap<Var, bool>> {
    let vars = cnf.vars();
    (0u64..(1u64 << vars.len()))
        .filter_map(|mask| {
            let a: HashMap<Var, bool> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (*v, mask >> i & 1 == 1))
                .collect();
            cnf.eval(|v| a[&v]).then_some(a)
        })
        .collect()
}
