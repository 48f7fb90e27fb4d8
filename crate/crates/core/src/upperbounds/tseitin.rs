//! Tseitin formulas and their width-1 refutations.
//!
//! With `y_e = 1 - 2 x_e`, the vertex constraint reads
//! `A_u = prod_{e at u} y_e - s_u = 0` where `s_u = (-1)^{charge(u)}`, and
//! `A_u` is `-2 s_u` times the sum of the clause translations of `u`. The
//! telescoping identities
//! `prod_u M_u - prod_u s_u = sum_j (prod_{h<j} M_h)(prod_{g>j} s_g) A_j` and
//! `prod_e y_e^2 - 1 = sum_k (prod_{e<k} y_e^2)(y_k^2 - 1)`, with odd total
//! charge, give `2` as a combination whose coefficients are single
//! monomials in `y`. Each is built as a program in `y` and then moved to the
//! `{0,1}` basis by one affine substitution per variable.

use std::collections::HashMap;

use crate::algebra::{FieldElement, Monomial, PolyRing, SparsePoly, Var};
use crate::certificate::LinearIpsCertificate;
use crate::error::{Error, Result};
use crate::formulas::{translate_cnf, Clause, Cnf, Literal};
use crate::roabp::Roabp;

/// Graph on vertices `0..vertices` with parallel edges allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TseitinInstance {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub charge: Vec<bool>,
}

impl TseitinInstance {
    pub fn new(
        vertices: usize,
        edges: Vec<(usize, usize)>,
        charge: Vec<bool>,
    ) -> Result<TseitinInstance> {
        if charge.len() != vertices {
            return Err(Error::Invalid(format!(
                "{} charges for {vertices} vertices",
                charge.len()
            )));
        }
        for &(a, b) in &edges {
            if a >= vertices || b >= vertices {
                return Err(Error::Invalid(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::Invalid(format!("self-loop at vertex {a}")));
            }
        }
        Ok(TseitinInstance {
            vertices,
            edges,
            charge,
        })
    }

    /// Cycle on `n` vertices with charge 1 on vertex 0.
    pub fn cycle(n: usize) -> TseitinInstance {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let charge = (0..n).map(|i| i == 0).collect();
        TseitinInstance::new(n, edges, charge).expect("valid cycle")
    }

    /// Complete graph on `n` vertices with charge 1 on vertex 0.
    pub fn complete(n: usize) -> TseitinInstance {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        let charge = (0..n).map(|i| i == 0).collect();
        TseitinInstance::new(n, edges, charge).expect("valid complete graph")
    }

    pub fn total_charge_odd(&self) -> bool {
        self.charge.iter().filter(|c| **c).count() % 2 == 1
    }

    /// Parses `a b` edge lines and one `charge c_0 c_1 ...` line; `#` starts
    /// a comment. The vertex count is one more than the largest label seen.
    pub fn parse(text: &str) -> Result<TseitinInstance> {
        let mut edges = Vec::new();
        let mut charge: Option<Vec<bool>> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::Parse(format!("graph line {}: {m}", ln + 1));
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "charge" {
                if charge.is_some() {
                    return Err(bad("duplicate charge line"));
                }
                charge = Some(
                    toks[1..]
                        .iter()
                        .map(|t| match *t {
                            "0" => Ok(false),
                            "1" => Ok(true),
                            _ => Err(bad("charges must be 0 or 1")),
                        })
                        .collect::<Result<_>>()?,
                );
                continue;
            }
            if toks.len() != 2 {
                return Err(bad("expected `a b`"));
            }
            let a = toks[0].parse::<usize>().map_err(|_| bad("bad vertex"))?;
            let b = toks[1].parse::<usize>().map_err(|_| bad("bad vertex"))?;
            edges.push((a, b));
        }
        let charge = charge.ok_or_else(|| Error::Parse("graph has no charge line".into()))?;
        let seen = edges.iter().map(|(a, b)| a.max(b) + 1).max().unwrap_or(0);
        TseitinInstance::new(charge.len().max(seen), edges, charge)
    }

    pub fn to_text(&self) -> String {
        let mut s: String = self
            .edges
            .iter()
            .map(|(a, b)| format!("{a} {b}\n"))
            .collect();
        let c: Vec<&str> = self
            .charge
            .iter()
            .map(|b| if *b { "1" } else { "0" })
            .collect();
        s.push_str(&format!("charge {}\n", c.join(" ")));
        s
    }

    fn incident(&self, u: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|e| self.edges[*e].0 == u || self.edges[*e].1 == u)
            .collect()
    }

    /// The CNF over edge variables `e1, e2, ...`; each vertex contributes
    /// one clause per wrong-parity assignment of its edges. Also returns,
    /// per clause, its vertex.
    pub fn formula(&self, ring: &PolyRing) -> Result<(Cnf, Vec<Var>, Vec<usize>)> {
        let vars: Vec<Var> = (1..=self.edges.len())
            .map(|k| ring.var(&format!("e{k}")))
            .collect();
        let mut f = Cnf::with_vars(ring, vars.clone());
        let mut owner = Vec::new();
        for u in 0..self.vertices {
            let inc = self.incident(u);
            if inc.is_empty() {
                if self.charge[u] {
                    return Err(Error::Invalid(format!("isolated vertex {u} has charge 1")));
                }
                continue;
            }
            for beta in 0..1u64 << inc.len() {
                if (beta.count_ones() % 2 == 1) == self.charge[u] {
                    continue;
                }
                let lits = inc
                    .iter()
                    .enumerate()
                    .map(|(k, e)| Literal {
                        var: vars[*e],
                        positive: beta >> k & 1 == 0,
                    })
                    .collect();
                f.push(Clause::new(lits)?);
                owner.push(u);
            }
        }
        Ok((f, vars, owner))
    }
}

#[derive(Clone, Debug)]
pub struct TseitinRefutation {
    pub certificate: LinearIpsCertificate,
    /// `4 |E|`.
    pub width_bound: usize,
}

/// Program for `scale * prod_v y_v^{e_v}` with `y_v = 1 - 2 x_v`.
fn y_monomial(ring: &PolyRing, m: &Monomial, scale: FieldElement, order: &[Var]) -> Result<Roabp> {
    let field = ring.field();
    let mut p = Roabp::from_sparse(&SparsePoly::term(ring, scale, m.clone()), order)?;
    for v in m.vars() {
        p = p.substitute_affine(v, &field.one(), &field.from_i64(-2))?;
    }
    Ok(p)
}

pub fn refute_tseitin(
    t: &TseitinInstance,
    ring: &PolyRing,
    order: Option<&[Var]>,
) -> Result<TseitinRefutation> {
    let field = ring.field();
    if field.characteristic() == 2 {
        return Err(Error::Characteristic(
            "Tseitin refutations need characteristic other than 2".into(),
        ));
    }
    if !t.total_charge_odd() {
        return Err(Error::Invalid("total charge is even".into()));
    }
    let (f, vars, owner) = t.formula(ring)?;
    let order: Vec<Var> = match order {
        Some(o) => o.to_vec(),
        None => vars.clone(),
    };
    let system = translate_cnf(&f);
    let sign = |u: usize| if t.charge[u] { -1 } else { 1 };
    let active: Vec<usize> = (0..t.vertices)
        .filter(|u| !t.incident(*u).is_empty())
        .collect();
    let edge_monomial = |u: usize| {
        t.incident(u)
            .iter()
            .fold(Monomial::one(), |m, e| m.mul(&Monomial::var(vars[*e])))
    };
    // coefficient of A_j: (prod_{h<j} M_h) * (prod_{g>j} s_g)
    let mut vertex_coeff: HashMap<usize, Roabp> = HashMap::new();
    for (j, u) in active.iter().enumerate() {
        let m = active[..j]
            .iter()
            .fold(Monomial::one(), |m, h| m.mul(&edge_monomial(*h)));
        let s: i64 = active[j + 1..].iter().map(|g| sign(*g)).product();
        // clause coefficient: (1/2) * (-2 s_u) * c_j = -s_u * c_j
        vertex_coeff.insert(
            *u,
            y_monomial(ring, &m, field.from_i64(-s * sign(*u)), &order)?,
        );
    }
    let mut coefficients = Vec::with_capacity(system.len());
    for u in &owner {
        coefficients.push(vertex_coeff[u].clone());
    }
    // Boolean axioms: (1/2) * 4 * (prod_{e<k} y_e^2) with a minus sign.
    for (k, _) in vars.iter().enumerate() {
        let m = vars[..k]
            .iter()
            .fold(Monomial::one(), |m, v| m.mul(&Monomial::pow(*v, 2)));
        coefficients.push(y_monomial(ring, &m, field.from_i64(-2), &order)?);
    }
    let certificate = LinearIpsCertificate::refutation(system, order, coefficients)?;
    Ok(TseitinRefutation {
        width_bound: 4 * t.edges.len(),
        certificate,
    })
}
