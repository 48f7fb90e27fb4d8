//! Tree-like Polynomial Calculus proofs and their simulation by linear IPS
//! certificates: multiplying a derivation by a variable keeps its width and
//! a linear combination adds widths, so line `i` costs at most `s_i * w`
//! for subtree size `s_i`.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{FieldElement, SparsePoly, Var};
use crate::certificate::{axiom_program, DecisionTree, LinearIpsCertificate};
use crate::error::{Error, Result};
use crate::formulas::{as_clause, translate_clause, PolySystem};
use crate::roabp::Roabp;

#[derive(Clone, Debug, PartialEq)]
pub enum PcRule {
    /// The `j`-th polynomial of the system.
    Axiom(usize),
    /// `v * q_i`
    MulVar(usize, Var),
    /// `a * q_i + b * q_j`
    LinComb(usize, usize, FieldElement, FieldElement),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PcLine {
    pub poly: SparsePoly,
    pub rule: PcRule,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PcProof {
    pub lines: Vec<PcLine>,
}

impl PcProof {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    fn premises(rule: &PcRule) -> Vec<usize> {
        match rule {
            PcRule::Axiom(_) => vec![],
            PcRule::MulVar(i, _) => vec![*i],
            PcRule::LinComb(i, j, _, _) => vec![*i, *j],
        }
    }

    /// Checks every line against its rule.
    pub fn check(&self, axioms: &PolySystem) -> Result<()> {
        let ring = axioms.ring();
        for (n, line) in self.lines.iter().enumerate() {
            if Self::premises(&line.rule).iter().any(|i| *i >= n) {
                return Err(Error::Invalid(format!("line {n} cites a later line")));
            }
            let expect = match &line.rule {
                PcRule::Axiom(j) => axioms
                    .entries()
                    .get(*j)
                    .map(|e| e.poly.clone())
                    .ok_or_else(|| Error::Invalid(format!("line {n} cites missing axiom {j}")))?,
                PcRule::MulVar(i, v) => &self.lines[*i].poly * &SparsePoly::var(ring, *v),
                PcRule::LinComb(i, j, a, b) => {
                    &self.lines[*i].poly.scale(a) + &self.lines[*j].poly.scale(b)
                }
            };
            if expect != line.poly {
                return Err(Error::Invalid(format!(
                    "line {n} does not follow from its rule"
                )));
            }
        }
        Ok(())
    }

    /// Errors with the first line used twice as a premise.
    pub fn check_tree_like(&self) -> Result<()> {
        let mut used = vec![false; self.lines.len()];
        for line in &self.lines {
            for i in Self::premises(&line.rule) {
                if used[i] {
                    return Err(Error::NotTreeLike(i));
                }
                used[i] = true;
            }
        }
        Ok(())
    }

    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = Vec::with_capacity(self.lines.len());
        for line in &self.lines {
            s.push(
                1 + Self::premises(&line.rule)
                    .iter()
                    .map(|i| s[*i])
                    .sum::<usize>(),
            );
        }
        s
    }

    fn push(&mut self, poly: SparsePoly, rule: PcRule) -> usize {
        self.lines.push(PcLine { poly, rule });
        self.lines.len() - 1
    }
}

#[derive(Clone, Debug)]
pub struct PcSimulation {
    pub certificate: LinearIpsCertificate,
    /// Largest axiom-program width in the order.
    pub axiom_width: usize,
    /// Width of the derivation of each line.
    pub line_widths: Vec<usize>,
    pub subtree_sizes: Vec<usize>,
}

impl PcSimulation {
    /// `len * w`, the bound on the final width.
    pub fn bound(&self) -> usize {
        self.line_widths.len() * self.axiom_width
    }
}

pub fn simulate_treelike_pc(
    proof: &PcProof,
    axioms: &PolySystem,
    order: &[Var],
) -> Result<PcSimulation> {
    let ring = axioms.ring();
    let last = proof
        .lines
        .last()
        .ok_or_else(|| Error::Invalid("empty proof".into()))?;
    proof.check(axioms)?;
    proof.check_tree_like()?;
    let mut axiom_width = 1;
    for e in axioms.entries() {
        axiom_width = axiom_width.max(axiom_program(ring, &e.poly, order)?.width());
    }
    let sizes = proof.subtree_sizes();
    // derivation of each line: axiom index -> coefficient
    let mut derivs: Vec<BTreeMap<usize, Roabp>> = Vec::with_capacity(proof.len());
    let mut widths = Vec::with_capacity(proof.len());
    for (n, line) in proof.lines.iter().enumerate() {
        let d = match &line.rule {
            PcRule::Axiom(j) => BTreeMap::from([(*j, Roabp::one(ring, order))]),
            PcRule::MulVar(i, v) => std::mem::take(&mut derivs[*i])
                .into_iter()
                .map(|(k, q)| Ok((k, q.mul_var(*v)?)))
                .collect::<Result<_>>()?,
            PcRule::LinComb(i, j, a, b) => {
                let mut out: BTreeMap<usize, Roabp> = std::mem::take(&mut derivs[*i])
                    .into_iter()
                    .map(|(k, q)| (k, q.scale(a)))
                    .collect();
                for (k, q) in std::mem::take(&mut derivs[*j]) {
                    let q = q.scale(b);
                    let merged = match out.remove(&k) {
                        Some(p) => p.add(&q)?,
                        None => q,
                    };
                    out.insert(k, merged);
                }
                out
            }
        };
        let w = d.values().map(|q| q.width()).max().unwrap_or(1);
        if w > sizes[n] * axiom_width {
            return Err(Error::Invalid(format!(
                "line {n} has width {w} above {} * {axiom_width}",
                sizes[n]
            )));
        }
        widths.push(w);
        derivs.push(d);
    }
    let mut coefficients = vec![Roabp::zero(ring, order); axioms.len()];
    for (k, q) in std::mem::take(derivs.last_mut().expect("nonempty")) {
        coefficients[k] = q;
    }
    let certificate = LinearIpsCertificate::new(
        axioms.clone(),
        order.to_vec(),
        coefficients,
        last.poly.clone(),
    )?;
    Ok(PcSimulation {
        certificate,
        axiom_width,
        line_widths: widths,
        subtree_sizes: sizes,
    })
}

/// Tree-like proof of 1 from a decision tree over clause axioms: each leaf
/// derives its path indicator from the falsified clause, and each inner node
/// adds the indicators of its two branches. Multiplying by `1 - v` uses two
/// copies of the current subproof, keeping the proof tree-like.
pub fn pc_from_decision_tree(s: &PolySystem, tree: &DecisionTree) -> Result<PcProof> {
    let mut proof = PcProof::default();
    let mut path = Vec::new();
    build(s, tree, &mut path, &mut proof)?;
    Ok(proof)
}

fn build(
    s: &PolySystem,
    t: &DecisionTree,
    path: &mut Vec<(Var, bool)>,
    proof: &mut PcProof,
) -> Result<usize> {
    match t {
        DecisionTree::Leaf { axiom } => {
            let ring = s.ring();
            let p = &s.entries()[*axiom].poly;
            let (in_clause, unscaled): (HashMap<Var, bool>, SparsePoly) = match as_clause(p) {
                Some(c) => (
                    c.literals().iter().map(|l| (l.var, !l.positive)).collect(),
                    translate_clause(ring, &c),
                ),
                None if p.is_constant() && !p.is_zero() => (HashMap::new(), SparsePoly::one(ring)),
                None => {
                    return Err(Error::Shape(format!(
                        "leaf axiom `{p}` is not a clause translation"
                    )))
                }
            };
            let extra: Vec<(Var, bool)> = path
                .iter()
                .copied()
                .filter(|(v, _)| !in_clause.contains_key(v))
                .collect();
            let (_, a) = p.leading().expect("nonzero");
            let (_, b) = unscaled.leading().expect("nonzero");
            let unit = (b * &a.inv().ok_or(Error::DivisionByZero)?).clone();
            multiply(s, *axiom, &unit, &extra, proof)
        }
        DecisionTree::Node { var, zero, one } => {
            path.push((*var, false));
            let a = build(s, zero, path, proof)?;
            path.pop();
            path.push((*var, true));
            let b = build(s, one, path, proof)?;
            path.pop();
            let f = s.field();
            let poly = &proof.lines[a].poly + &proof.lines[b].poly;
            Ok(proof.push(poly, PcRule::LinComb(a, b, f.one(), f.one())))
        }
    }
}

/// `unit * axiom * prod (v or 1 - v)` over `factors`. A scaling other than
/// 1 combines two copies of the axiom, the second with coefficient 0.
fn multiply(
    s: &PolySystem,
    axiom: usize,
    unit: &FieldElement,
    factors: &[(Var, bool)],
    proof: &mut PcProof,
) -> Result<usize> {
    let ring = s.ring();
    let f = s.field();
    match factors.split_last() {
        None => {
            let p = s.entries()[axiom].poly.clone();
            let a = proof.push(p.clone(), PcRule::Axiom(axiom));
            if unit.is_one() {
                return Ok(a);
            }
            let b = proof.push(p.clone(), PcRule::Axiom(axiom));
            Ok(proof.push(p.scale(unit), PcRule::LinComb(a, b, unit.clone(), f.zero())))
        }
        Some((&(v, true), rest)) => {
            let q = multiply(s, axiom, unit, rest, proof)?;
            let poly = &proof.lines[q].poly * &SparsePoly::var(ring, v);
            Ok(proof.push(poly, PcRule::MulVar(q, v)))
        }
        Some((&(v, false), rest)) => {
            let q1 = multiply(s, axiom, unit, rest, proof)?;
            let q2 = multiply(s, axiom, unit, rest, proof)?;
            let poly = &proof.lines[q2].poly * &SparsePoly::var(ring, v);
            let m = proof.push(poly, PcRule::MulVar(q2, v));
            let poly = &proof.lines[q1].poly - &proof.lines[m].poly;
            Ok(proof.push(poly, PcRule::LinComb(q1, m, f.one(), -&f.one())))
        }
    }
}
