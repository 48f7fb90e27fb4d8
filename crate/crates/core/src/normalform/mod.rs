//! z-normal form: rewriting P0 so that every polynomial is z-free or of the
//! shape `p' + z_j * p''`, with low-width derivations of the original
//! polynomials, and the application to refutations.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::{Monomial, SparsePoly, Var};
use crate::certificate::{compose_derivation, LinearIpsCertificate};
use crate::error::{Error, Result};
use crate::formulas::{brute_force_sat, Kind, Part, PolySystem, Role};
use crate::roabp::Roabp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormalMode {
    Nonmonotone,
    Monotone,
}

#[derive(Clone, Debug)]
pub struct NormalFormResult {
    /// P0' together with the untouched P1 part.
    pub normalized: PolySystem,
    /// One derivation per entry of the input system, each from `normalized`
    /// in `order`.
    pub derivations: Vec<LinearIpsCertificate>,
    pub mode: NormalMode,
    /// Fresh auxiliary variables in creation order.
    pub w_vars: Vec<Var>,
    /// Extended order: the base order with `w_vars` right after its last
    /// `x` variable.
    pub order: Vec<Var>,
}

impl NormalFormResult {
    pub fn derivation_widths(&self) -> Vec<usize> {
        self.derivations.iter().map(|d| d.width()).collect()
    }
}

fn z_vars_of(s: &PolySystem, p: &SparsePoly) -> Vec<Var> {
    p.variables()
        .into_iter()
        .filter(|v| s.role(*v) == Some(Role::Z))
        .collect()
}

/// True if every P0 polynomial is z-free or `p' + z_j * p''` with `p'`,
/// `p''` z-free.
pub fn is_znormal(s: &PolySystem) -> bool {
    s.part(Part::P0).all(|(_, e)| {
        let zs = z_vars_of(s, &e.poly);
        zs.is_empty() || (zs.len() == 1 && e.poly.degree_in(zs[0]) == 1)
    })
}

/// True if every P0 polynomial is `p'` or `z_j * p'` with `p'` z-free.
pub fn is_monotone_znormal(s: &PolySystem) -> bool {
    s.part(Part::P0)
        .all(|(_, e)| match monotone_split(s, &e.poly) {
            Ok((zs, _)) => zs.len() <= 1,
            Err(_) => false,
        })
}

/// Writes `p = (prod_{i in I} z_i) * p'(x)` with I a set.
fn monotone_split(s: &PolySystem, p: &SparsePoly) -> Result<(Vec<Var>, SparsePoly)> {
    let ring = s.ring();
    let is_z = |v: Var| s.role(v) == Some(Role::Z);
    let mut zpart: Option<Monomial> = None;
    let mut rest = SparsePoly::zero(ring);
    for (m, c) in p.terms() {
        let zm = m.filter(is_z);
        match &zpart {
            None => zpart = Some(zm.clone()),
            Some(z) if *z == zm => {}
            Some(_) => {
                return Err(Error::Shape(format!(
                    "`{p}` is not a z-monomial times a z-free polynomial"
                )));
            }
        }
        rest = &rest + &SparsePoly::term(ring, c.clone(), m.filter(|v| !is_z(v)));
    }
    let zm = zpart.unwrap_or_else(Monomial::one);
    if zm.factors().iter().any(|(_, e)| *e > 1) {
        return Err(Error::Shape(format!("`{p}` has a repeated z factor")));
    }
    Ok((zm.vars().collect(), rest))
}

/// Default order for standalone use: x, then w, then z, then y.
pub fn default_order(s: &PolySystem) -> Vec<Var> {
    [Role::X, Role::AuxW, Role::AuxField, Role::Z, Role::Y]
        .iter()
        .flat_map(|r| s.vars_with_role(*r))
        .collect()
}

/// Inserts `w` right after the last position holding an `x` (or existing
/// auxiliary) variable.
fn insert_after_x(s: &PolySystem, order: &[Var], w: &[Var]) -> Vec<Var> {
    let last = order
        .iter()
        .rposition(|v| matches!(s.role(*v), Some(Role::X) | Some(Role::AuxW)))
        .map(|i| i + 1)
        .unwrap_or(0);
    let mut out = order[..last].to_vec();
    out.extend_from_slice(w);
    out.extend_from_slice(&order[last..]);
    out
}

/// Rewrites the P0 part of `s` into (monotone) z-normal form.
///
/// Nonmonotone: each z that occurs in P0 gets a fresh `w`; every
/// polynomial `p` becomes `p*` (z replaced by w) and the axioms `z - w`
/// are added. The derivation of `p` uses the telescoping identity
/// `prod z - prod w = sum_j (prod_{h<j} z)(prod_{g>j} w)(z_j - w_j)`.
///
/// Monotone: `p = (prod_{i in I} z_i) p'` with `I` nonempty becomes
/// `p' + sum_i w_{p,i}` and `z_i * w_{p,i}`, derived by
/// `(prod z) p' = (prod z)(p' + sum w) - sum_i (prod_{j != i} z_j)(z_i w_i)`.
pub fn to_znormal(
    s: &PolySystem,
    mode: NormalMode,
    base_order: Option<&[Var]>,
) -> Result<NormalFormResult> {
    let ring = s.ring();
    let field = s.field();
    let base: Vec<Var> = match base_order {
        Some(o) => o.to_vec(),
        None => default_order(s),
    };
    for v in s.mentioned() {
        if !base.contains(&v) {
            return Err(Error::VariableOutsideOrder(ring.name(v)));
        }
    }
    let mut out = PolySystem::new(ring);
    for (v, r) in s.roles() {
        out.set_role(*v, *r)?;
    }
    let mut w_vars = Vec::new();
    // derivation recipes: (entry index in `out`, coefficient polynomial)
    let mut recipes: Vec<Vec<(usize, SparsePoly)>> = Vec::new();
    match mode {
        NormalMode::Nonmonotone => {
            let zs: BTreeSet<Var> = s
                .part(Part::P0)
                .filter(|(_, e)| e.kind == Kind::Axiom)
                .flat_map(|(_, e)| z_vars_of(s, &e.poly))
                .collect();
            let mut wmap: HashMap<Var, Var> = HashMap::new();
            for z in &zs {
                let w = ring.fresh("w");
                out.set_role(w, Role::AuxW)?;
                wmap.insert(*z, w);
                w_vars.push(w);
            }
            let wpoly: HashMap<Var, SparsePoly> = wmap
                .iter()
                .map(|(z, w)| (*z, SparsePoly::var(ring, *w)))
                .collect();
            let mut pending: Vec<(usize, SparsePoly)> = Vec::new();
            for e in s.entries() {
                let transform = e.part == Part::P0
                    && e.kind == Kind::Axiom
                    && !z_vars_of(s, &e.poly).is_empty();
                let p = if transform {
                    e.poly.substitute(&wpoly)
                } else {
                    e.poly.clone()
                };
                let id = out.push(p, e.kind, e.part)?;
                recipes.push(vec![(id, SparsePoly::one(ring))]);
                if transform {
                    pending.push((recipes.len() - 1, e.poly.clone()));
                }
            }
            let mut zw_index: HashMap<Var, usize> = HashMap::new();
            for z in &zs {
                let ax = &SparsePoly::var(ring, *z) - &SparsePoly::var(ring, wmap[z]);
                zw_index.insert(*z, out.push_axiom(ax, Part::P0)?);
            }
            for (k, p) in pending {
                let mut coeff: HashMap<Var, SparsePoly> = HashMap::new();
                for (m, c) in p.terms() {
                    let xpart = m.filter(|v| !zs.contains(&v));
                    let occ: Vec<Var> = m
                        .factors()
                        .iter()
                        .filter(|(v, _)| zs.contains(v))
                        .flat_map(|(v, e)| std::iter::repeat(*v).take(*e as usize))
                        .collect();
                    for j in 0..occ.len() {
                        let mut t = Monomial::one();
                        for z in &occ[..j] {
                            t = t.mul(&Monomial::var(*z));
                        }
                        for z in &occ[j + 1..] {
                            t = t.mul(&Monomial::var(wmap[z]));
                        }
                        let term = SparsePoly::term(ring, c.clone(), t.mul(&xpart));
                        let slot = coeff
                            .entry(occ[j])
                            .or_insert_with(|| SparsePoly::zero(ring));
                        *slot = &*slot + &term;
                    }
                }
                for (z, q) in coeff {
                    recipes[k].push((zw_index[&z], q));
                }
            }
        }
        NormalMode::Monotone => {
            for e in s.entries() {
                if e.part != Part::P0 || e.kind != Kind::Axiom {
                    let id = out.push(e.poly.clone(), e.kind, e.part)?;
                    recipes.push(vec![(id, SparsePoly::one(ring))]);
                    continue;
                }
                let (zs, pp) = monotone_split(s, &e.poly)?;
                if zs.is_empty() {
                    let id = out.push(e.poly.clone(), e.kind, e.part)?;
                    recipes.push(vec![(id, SparsePoly::one(ring))]);
                    continue;
                }
                let ws: Vec<Var> = zs.iter().map(|_| ring.fresh("w")).collect();
                let mut sum = pp.clone();
                for w in &ws {
                    out.set_role(*w, Role::AuxW)?;
                    w_vars.push(*w);
                    sum = &sum + &SparsePoly::var(ring, *w);
                }
                let zprod = zs
                    .iter()
                    .fold(Monomial::one(), |m, z| m.mul(&Monomial::var(*z)));
                let main = out.push_axiom(sum, Part::P0)?;
                let mut recipe = vec![(main, SparsePoly::term(ring, field.one(), zprod))];
                for (i, (z, w)) in zs.iter().zip(&ws).enumerate() {
                    let ax = SparsePoly::term(
                        ring,
                        field.one(),
                        Monomial::var(*z).mul(&Monomial::var(*w)),
                    );
                    let id = out.push_axiom(ax, Part::P0)?;
                    let others = zs
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .fold(Monomial::one(), |m, (_, z)| m.mul(&Monomial::var(*z)));
                    recipe.push((id, SparsePoly::term(ring, -&field.one(), others)));
                }
                recipes.push(recipe);
            }
        }
    }
    let order = insert_after_x(s, &base, &w_vars);
    let mut derivations = Vec::with_capacity(recipes.len());
    for (k, recipe) in recipes.iter().enumerate() {
        let mut coeffs = vec![Roabp::zero(ring, &order); out.len()];
        for (id, q) in recipe {
            coeffs[*id] = Roabp::from_sparse(q, &order)?;
        }
        derivations.push(LinearIpsCertificate::new(
            out.clone(),
            order.clone(),
            coeffs,
            s.entries()[k].poly.clone(),
        )?);
    }
    Ok(NormalFormResult {
        normalized: out,
        derivations,
        mode,
        w_vars,
        order,
    })
}

/// Compares satisfiability of the P0 parts before and after normalisation
/// at a z-assignment.
pub fn check_equisat(
    s: &PolySystem,
    result: &NormalFormResult,
    alpha: &HashMap<Var, bool>,
) -> Result<bool> {
    let before = brute_force_sat(&s.restrict_to(&[Part::P0]), Some(alpha))?.sat;
    let after = brute_force_sat(&result.normalized.restrict_to(&[Part::P0]), Some(alpha))?.sat;
    Ok(before == after)
}

/// Outcome of converting a refutation to one of the normalised system.
#[derive(Clone, Debug)]
pub struct NormalizedRefutation {
    pub normal_form: NormalFormResult,
    pub certificate: LinearIpsCertificate,
    /// `width(input) * max derivation width * |P0|`, the bound asserted on
    /// the output width.
    pub width_bound: usize,
}

/// Transforms a refutation of `P0 + P1` whose order lists x first into a
/// refutation of `P0' + P1` whose order lists x and w first. When P0 is
/// already in the required normal form the derivations are identities.
pub fn apply_normal_form(
    c: &LinearIpsCertificate,
    mode: NormalMode,
) -> Result<NormalizedRefutation> {
    let s = &c.system;
    let first_other = c
        .order
        .iter()
        .position(|v| matches!(s.role(*v), Some(Role::Y) | Some(Role::Z)))
        .unwrap_or(c.order.len());
    if c.order[first_other..]
        .iter()
        .any(|v| s.role(*v) == Some(Role::X))
    {
        return Err(Error::OrderMismatch(
            "x variables must precede y and z variables".into(),
        ));
    }
    let normal = match mode {
        NormalMode::Nonmonotone => is_znormal(s),
        NormalMode::Monotone => is_monotone_znormal(s),
    };
    let nf = if normal {
        identity_normal_form(s, &c.order, mode)?
    } else {
        to_znormal(s, mode, Some(&c.order))?
    };
    let outer = LinearIpsCertificate::new(
        s.clone(),
        nf.order.clone(),
        c.coefficients
            .iter()
            .map(|q| q.extend_order(&nf.order))
            .collect::<Result<Vec<_>>>()?,
        c.target.clone(),
    )?;
    let certificate = compose_derivation(&outer, &nf.derivations)?;
    let p0 = s.part(Part::P0).count().max(1);
    let dmax = nf.derivations.iter().map(|d| d.width()).max().unwrap_or(1);
    let width_bound = c.width() * dmax * p0;
    if certificate.width() > width_bound {
        return Err(Error::Invalid(format!(
            "composed width {} exceeds bound {width_bound}",
            certificate.width()
        )));
    }
    Ok(NormalizedRefutation {
        normal_form: nf,
        certificate,
        width_bound,
    })
}

fn identity_normal_form(
    s: &PolySystem,
    order: &[Var],
    mode: NormalMode,
) -> Result<NormalFormResult> {
    let derivations = (0..s.len())
        .map(|i| crate::certificate::identity_derivation(s, order, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalFormResult {
        normalized: s.clone(),
        derivations,
        mode,
        w_vars: Vec::new(),
        order: order.to_vec(),
    })
}

#[cfg(test)]
mod tests;
