//! Lifting a 3-CNF `phi` over `x_1..x_N` to `Psi = Phi1 and Phi2` over
//! selectors `u_{C,i,j,k}` and fresh variables `v_1..v_N`.
//!
//! `u_{C,i,j,k}` says that the variables of the literals of `C` are realised
//! by `v_i, v_j, v_k`. `Phi1` holds `~u | l1(v_i) | l2(v_j) | l3(v_k)`, and
//! `Phi2` forces exactly one selector per clause with all chosen partial maps
//! jointly one-to-one.

use std::collections::HashMap;

use serde_json::json;

use crate::algebra::{FieldElement, SparsePoly, Var};
use crate::certificate::LinearIpsCertificate;
use crate::error::{Error, Result};
use crate::formulas::{translate_cnf, Clause, Cnf, Literal};
use crate::roabp::Roabp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selector {
    pub clause: usize,
    /// 0-based indices into `v`, one per literal of the clause.
    pub triple: [usize; 3],
    pub var: Var,
}

#[derive(Clone, Debug)]
pub struct LiftedFormula {
    pub base: Cnf,
    pub v: Vec<Var>,
    pub selectors: Vec<Selector>,
    pub phi1: Cnf,
    pub phi2: Cnf,
    by_key: HashMap<(usize, [usize; 3]), usize>,
}

impl LiftedFormula {
    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn m(&self) -> usize {
        self.base.clauses().len()
    }

    pub fn selector(&self, clause: usize, triple: [usize; 3]) -> Option<&Selector> {
        self.by_key
            .get(&(clause, triple))
            .map(|i| &self.selectors[*i])
    }

    /// The partial map `v_i -> var(l_1), ...` of a selector.
    pub fn partial_map(&self, s: &Selector) -> [(usize, Var); 3] {
        let lits = self.base.clauses()[s.clause].literals();
        [0, 1, 2].map(|r| (s.triple[r], lits[r].var))
    }

    /// `Phi1 and Phi2` over selectors, then `v`.
    pub fn psi(&self) -> Cnf {
        let vars: Vec<Var> = self
            .selectors
            .iter()
            .map(|s| s.var)
            .chain(self.v.iter().copied())
            .collect();
        let mut f = Cnf::with_vars(self.base.ring(), vars);
        f.extend(&self.phi1);
        f.extend(&self.phi2);
        f
    }

    /// Sidecar index describing every selector and its partial map.
    pub fn index_json(&self) -> String {
        let ring = self.base.ring();
        let sels: Vec<_> = self
            .selectors
            .iter()
            .map(|s| {
                let map: Vec<_> = self
                    .partial_map(s)
                    .iter()
                    .map(|(i, x)| json!([ring.name(self.v[*i]), ring.name(*x)]))
                    .collect();
                json!({
                    "name": ring.name(s.var),
                    "clause": s.clause + 1,
                    "triple": s.triple.map(|i| i + 1),
                    "map": map,
                })
            })
            .collect();
        let doc = json!({
            "n": self.n(),
            "m": self.m(),
            "v": ring.names(&self.v),
            "base_vars": ring.names(self.base.vars()),
            "selectors": sels,
        });
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

fn compatible(a: &[(usize, Var); 3], b: &[(usize, Var); 3]) -> bool {
    a.iter()
        .all(|(va, xa)| b.iter().all(|(vb, xb)| (va == vb) == (xa == xb)))
}

/// Pads clauses with fewer than 3 variables using fresh variables that are
/// forced to 0 by the four clauses `~p | +-a | +-b` over two existing
/// variables `a, b`. The result is equisatisfiable and every clause has 3
/// distinct variables.
pub fn pad_to_three(phi: &Cnf) -> Result<Cnf> {
    let ring = phi.ring();
    let short = phi
        .clauses()
        .iter()
        .map(|c| 3usize.saturating_sub(c.len()))
        .max()
        .unwrap_or(0);
    if let Some(c) = phi.clauses().iter().find(|c| c.len() > 3) {
        return Err(Error::Shape(format!(
            "clause {} has more than 3 variables",
            c.display(ring)
        )));
    }
    if short == 0 {
        return Ok(phi.clone());
    }
    if phi.vars().len() < 2 {
        return Err(Error::Shape("padding needs at least two variables".into()));
    }
    let (a, b) = (phi.vars()[0], phi.vars()[1]);
    let pads: Vec<Var> = (0..short).map(|_| ring.fresh("pad")).collect();
    let mut out = Cnf::with_vars(ring, phi.vars().to_vec());
    for c in phi.clauses() {
        let mut lits = c.literals().to_vec();
        lits.extend(pads[..3 - c.len()].iter().map(|p| Literal::pos(*p)));
        out.push(Clause::new(lits)?);
    }
    for p in &pads {
        for (sa, sb) in [(true, true), (true, false), (false, true), (false, false)] {
            out.push(Clause::new(vec![
                Literal::neg(*p),
                Literal {
                    var: a,
                    positive: sa,
                },
                Literal {
                    var: b,
                    positive: sb,
                },
            ])?);
        }
    }
    Ok(out)
}

pub fn lift(phi: &Cnf) -> Result<LiftedFormula> {
    let ring = phi.ring();
    if let Some(c) = phi.clauses().iter().find(|c| c.len() != 3) {
        return Err(Error::Shape(format!(
            "lifting needs exactly 3 distinct variables per clause, got {}",
            c.display(ring)
        )));
    }
    let n = phi.vars().len();
    let v: Vec<Var> = (1..=n).map(|i| ring.var(&format!("v{i}"))).collect();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && i != k {
                    triples.push([i, j, k]);
                }
            }
        }
    }
    let mut selectors = Vec::new();
    let mut by_key = HashMap::new();
    for ci in 0..phi.clauses().len() {
        for t in &triples {
            let var = ring.var(&format!(
                "u_{}_{}_{}_{}",
                ci + 1,
                t[0] + 1,
                t[1] + 1,
                t[2] + 1
            ));
            by_key.insert((ci, *t), selectors.len());
            selectors.push(Selector {
                clause: ci,
                triple: *t,
                var,
            });
        }
    }
    let mut phi1 = Cnf::new(ring);
    for s in &selectors {
        let lits = phi.clauses()[s.clause].literals();
        let mut c = vec![Literal::neg(s.var)];
        for r in 0..3 {
            c.push(Literal {
                var: v[s.triple[r]],
                positive: lits[r].positive,
            });
        }
        phi1.push(Clause::new(c)?);
    }
    let mut out = LiftedFormula {
        base: phi.clone(),
        v,
        selectors,
        phi1,
        phi2: Cnf::new(ring),
        by_key,
    };
    let per = triples.len();
    let mut phi2 = Cnf::new(ring);
    let m = phi.clauses().len();
    for ci in 0..m {
        let block = &out.selectors[ci * per..(ci + 1) * per];
        phi2.push(Clause::new(
            block.iter().map(|s| Literal::pos(s.var)).collect(),
        )?);
        for a in 0..per {
            for b in a + 1..per {
                phi2.push(Clause::new(vec![
                    Literal::neg(block[a].var),
                    Literal::neg(block[b].var),
                ])?);
            }
        }
    }
    let maps: Vec<[(usize, Var); 3]> = out.selectors.iter().map(|s| out.partial_map(s)).collect();
    for ci in 0..m {
        for di in ci + 1..m {
            for a in ci * per..(ci + 1) * per {
                for b in di * per..(di + 1) * per {
                    if !compatible(&maps[a], &maps[b]) {
                        phi2.push(Clause::new(vec![
                            Literal::neg(out.selectors[a].var),
                            Literal::neg(out.selectors[b].var),
                        ])?);
                    }
                }
            }
        }
    }
    out.phi2 = phi2;
    Ok(out)
}

/// Selector values and the renaming `v_{i_r} -> x_r` for one variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub u: HashMap<Var, bool>,
    pub renaming: HashMap<Var, Var>,
    /// Index of the selector set to 1, per base clause.
    pub chosen: Vec<usize>,
}

impl Restriction {
    pub fn constants(&self, one: &FieldElement, zero: &FieldElement) -> HashMap<Var, FieldElement> {
        self.u
            .iter()
            .map(|(v, b)| (*v, if *b { one.clone() } else { zero.clone() }))
            .collect()
    }

    pub fn restrict_poly(&self, p: &SparsePoly) -> SparsePoly {
        let f = p.field();
        p.substitute_constants(&self.constants(&f.one(), &f.zero()))
            .rename(&self.renaming)
    }

    /// Restricts a CNF: satisfied clauses vanish, false selector literals
    /// drop out and `v` is renamed.
    pub fn restrict_cnf(&self, f: &Cnf) -> Result<Cnf> {
        let mut out = Cnf::new(f.ring());
        'clauses: for c in f.clauses() {
            let mut lits = Vec::new();
            for l in c.literals() {
                match self.u.get(&l.var) {
                    Some(b) if l.eval(*b) => continue 'clauses,
                    Some(_) => {}
                    None => lits.push(*l),
                }
            }
            if lits.is_empty() {
                return Err(Error::Invalid(format!(
                    "restriction falsifies {}",
                    c.display(f.ring())
                )));
            }
            out.push(Clause::new(lits)?.rename(&self.renaming));
        }
        Ok(out)
    }
}

pub fn restriction_for_order(l: &LiftedFormula, order: &[Var]) -> Result<Restriction> {
    let induced: Vec<usize> = order
        .iter()
        .filter_map(|x| l.v.iter().position(|v| v == x))
        .collect();
    if induced.len() != l.n() {
        return Err(Error::Invalid(
            "order must contain every v-variable exactly once".into(),
        ));
    }
    let base = l.base.vars();
    let renaming: HashMap<Var, Var> = induced
        .iter()
        .enumerate()
        .map(|(r, i)| (l.v[*i], base[r]))
        .collect();
    let rank: HashMap<Var, usize> = base.iter().enumerate().map(|(r, x)| (*x, r)).collect();
    let mut u: HashMap<Var, bool> = l.selectors.iter().map(|s| (s.var, false)).collect();
    let mut chosen = Vec::with_capacity(l.m());
    for (ci, c) in l.base.clauses().iter().enumerate() {
        let t = [0, 1, 2].map(|r| induced[rank[&c.literals()[r].var]]);
        let k = l.by_key[&(ci, t)];
        u.insert(l.selectors[k].var, true);
        chosen.push(k);
    }
    Ok(Restriction {
        u,
        renaming,
        chosen,
    })
}

/// Restricts every coefficient of a refutation of `translate_cnf(Psi)` and
/// collects the surviving terms on the axioms of `translate_cnf(phi)`.
/// Axioms that become 0 under the restriction are dropped.
pub fn apply_restriction_to_certificate(
    c: &LinearIpsCertificate,
    l: &LiftedFormula,
    rho: &Restriction,
) -> Result<LinearIpsCertificate> {
    let ring = c.ring();
    let field = ring.field();
    let sigma = rho.constants(&field.one(), &field.zero());
    let target_sys = translate_cnf(&l.base);
    let restricted: Vec<Roabp> = c
        .coefficients
        .iter()
        .map(|q| q.restrict(&sigma, &rho.renaming))
        .collect::<Result<_>>()?;
    let order = match restricted.first() {
        Some(q) => q.order().to_vec(),
        None => return Err(Error::Invalid("empty certificate".into())),
    };
    let mut slots: Vec<Option<Roabp>> = vec![None; target_sys.len()];
    for (e, q) in c.system.entries().iter().zip(restricted) {
        let p = rho.restrict_poly(&e.poly);
        if p.is_zero() {
            continue;
        }
        let matches: Vec<usize> = (0..target_sys.len())
            .filter(|i| {
                target_sys.entries()[*i].poly == p && target_sys.entries()[*i].kind == e.kind
            })
            .collect();
        let k = *matches
            .iter()
            .find(|i| slots[**i].is_none())
            .or(matches.first())
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "restricted axiom `{p}` is not an axiom of the base formula"
                ))
            })?;
        slots[k] = Some(match slots[k].take() {
            Some(prev) => prev.add(&q)?,
            None => q,
        });
    }
    let coefficients = slots
        .into_iter()
        .map(|q| q.unwrap_or_else(|| Roabp::zero(ring, &order)))
        .collect();
    LinearIpsCertificate::new(
        target_sys,
        order,
        coefficients,
        rho.restrict_poly(&c.target),
    )
}
