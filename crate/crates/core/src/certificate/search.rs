//! Refutation oracles: degree-bounded Nullstellensatz by linear algebra, and
//! decision-tree refutations of clause systems.

use std::collections::{BTreeSet, HashMap};

use super::cert::LinearIpsCertificate;
use crate::algebra::{FieldElement, Monomial, SpanBasis, SparsePoly, SparseVec, Var};
use crate::error::{Error, Result};
use crate::formulas::{as_clause, Clause, Kind, PolySystem};
use crate::roabp::{Roabp, UniPoly};

/// Default cap on the number of unknown coefficients.
pub const DEFAULT_NS_UNKNOWNS: usize = 200_000;

/// Looks for `sum_i q_i * p_i = 1` with `deg(q_i) + deg(p_i) <= d`.
///
/// Works modulo the Boolean axioms: the `q_i` of the other axioms range over
/// monomials that are multilinear in the variables having a Boolean axiom,
/// and the Boolean-axiom coefficients are recovered afterwards by division.
/// Returns `None` exactly when no degree-`d` refutation exists.
pub fn find_ns_refutation(
    s: &PolySystem,
    d: u32,
    order: &[Var],
) -> Result<Option<LinearIpsCertificate>> {
    find_ns_refutation_with_budget(s, d, order, DEFAULT_NS_UNKNOWNS)
}

pub fn find_ns_refutation_with_budget(
    s: &PolySystem,
    d: u32,
    order: &[Var],
    max_unknowns: usize,
) -> Result<Option<LinearIpsCertificate>> {
    let ring = s.ring();
    let field = s.field();
    let boolean: BTreeSet<Var> = s
        .entries()
        .iter()
        .filter(|e| e.kind == Kind::Boolean)
        .flat_map(|e| e.poly.variables())
        .collect();
    let is_bool = |v: Var| boolean.contains(&v);
    let vars: Vec<Var> = s.mentioned().into_iter().collect();
    for v in &vars {
        if !order.contains(v) {
            return Err(Error::VariableOutsideOrder(ring.name(*v)));
        }
    }
    let axioms: Vec<usize> = (0..s.len())
        .filter(|&i| s.entries()[i].kind != Kind::Boolean)
        .collect();
    let mut by_degree: Vec<Vec<Monomial>> = Vec::new();
    let max_deg = axioms
        .iter()
        .map(|&i| d.saturating_sub(s.entries()[i].poly.degree()))
        .max()
        .unwrap_or(0);
    let mut total = 0usize;
    for &i in &axioms {
        let pd = s.entries()[i].poly.degree();
        if pd <= d {
            total += count_monomials(&vars, &is_bool, d - pd, max_unknowns);
        }
        if total > max_unknowns {
            return Err(Error::Budget(format!(
                "more than {max_unknowns} unknown coefficients at degree {d}"
            )));
        }
    }
    by_degree.resize(max_deg as usize + 1, Vec::new());
    let all = monomials_up_to(&vars, &is_bool, max_deg);
    for m in all {
        by_degree[m.degree() as usize].push(m);
    }

    let mut columns: HashMap<Monomial, u32> = HashMap::new();
    let column = |m: Monomial, columns: &mut HashMap<Monomial, u32>| {
        let n = columns.len() as u32;
        *columns.entry(m).or_insert(n)
    };
    let mut basis = SpanBasis::new(field, true);
    let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
    for &i in &axioms {
        let p = s.entries()[i].poly.multilinearize(is_bool);
        let pd = s.entries()[i].poly.degree();
        if pd > d {
            continue;
        }
        for k in 0..=(d - pd) as usize {
            for m in &by_degree[k] {
                let prod = p.mul_monomial(m, &field.one()).multilinearize(is_bool);
                let mut v: SparseVec = prod
                    .terms()
                    .map(|(mm, c)| (column(mm.clone(), &mut columns), c.clone()))
                    .collect();
                v.sort_by_key(|(k, _)| *k);
                basis.insert(unknowns.len(), v);
                unknowns.push((i, m.clone()));
            }
        }
    }
    let one_col = column(Monomial::one(), &mut columns);
    let Some(sol) = basis.solve(vec![(one_col, field.one())]) else {
        return Ok(None);
    };
    let mut q: Vec<SparsePoly> = vec![SparsePoly::zero(ring); s.len()];
    for (k, c) in sol {
        let (i, m) = &unknowns[k];
        q[*i] = &q[*i] + &SparsePoly::term(ring, c, m.clone());
    }
    // 1 - sum q_i p_i lies in the Boolean ideal; divide it out.
    let mut rest = SparsePoly::one(ring);
    for (i, qi) in q.iter().enumerate() {
        rest = &rest - &(qi * &s.entries()[i].poly);
    }
    let mut boolean_coeff: HashMap<Var, SparsePoly> = HashMap::new();
    for v in &boolean {
        let (r, h) = rest.divide_boolean(*v);
        rest = r;
        if !h.is_zero() {
            boolean_coeff.insert(*v, h);
        }
    }
    debug_assert!(rest.is_zero(), "residual outside the Boolean ideal");
    for (i, e) in s.entries().iter().enumerate() {
        if e.kind == Kind::Boolean {
            let v = *e.poly.variables().iter().next().expect("one variable");
            if let Some(h) = boolean_coeff.remove(&v) {
                q[i] = h;
            }
        }
    }
    let coefficients = q
        .iter()
        .map(|qi| Roabp::from_sparse(qi, order))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(LinearIpsCertificate::refutation(
        s.clone(),
        order.to_vec(),
        coefficients,
    )?))
}

fn count_monomials<F: Fn(Var) -> bool>(vars: &[Var], is_bool: &F, d: u32, cap: usize) -> usize {
    // (number of monomials of degree <= d) capped to avoid overflow
    let nb = vars.iter().filter(|v| is_bool(**v)).count();
    let na = vars.len() - nb;
    let mut table = vec![0usize; d as usize + 1];
    table[0] = 1;
    for _ in 0..nb {
        for k in (1..=d as usize).rev() {
            table[k] = table[k].saturating_add(table[k - 1]).min(cap + 1);
        }
    }
    for _ in 0..na {
        for k in 1..=d as usize {
            table[k] = table[k].saturating_add(table[k - 1]).min(cap + 1);
        }
    }
    table
        .iter()
        .fold(0usize, |a, b| a.saturating_add(*b))
        .min(cap + 1)
}

fn monomials_up_to<F: Fn(Var) -> bool>(vars: &[Var], is_bool: &F, d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for v in vars {
        let max_e = if is_bool(*v) { 1 } else { d };
        let mut next = Vec::new();
        for m in &out {
            let deg = m.degree();
            for e in 1..=max_e {
                if deg + e > d {
                    break;
                }
                next.push(m.mul(&Monomial::pow(*v, e)));
            }
        }
        out.extend(next);
    }
    out
}

/// A decision tree whose leaves name a falsified axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf {
        axiom: usize,
    },
    Node {
        var: Var,
        zero: Box<DecisionTree>,
        one: Box<DecisionTree>,
    },
}

impl DecisionTree {
    pub fn leaves(&self) -> usize {
        match self {
            DecisionTree::Leaf { .. } => 1,
            DecisionTree::Node { zero, one, .. } => zero.leaves() + one.leaves(),
        }
    }

    /// Visits every leaf with its path `(var, value)` from the root.
    pub fn for_each_leaf<F: FnMut(usize, &[(Var, bool)])>(&self, f: &mut F) {
        fn go<F: FnMut(usize, &[(Var, bool)])>(
            t: &DecisionTree,
            path: &mut Vec<(Var, bool)>,
            f: &mut F,
        ) {
            match t {
                DecisionTree::Leaf { axiom } => f(*axiom, path),
                DecisionTree::Node { var, zero, one } => {
                    path.push((*var, false));
                    go(zero, path, f);
                    path.pop();
                    path.push((*var, true));
                    go(one, path, f);
                    path.pop();
                }
            }
        }
        go(self, &mut Vec::new(), f);
    }
}

/// Default cap on decision-tree nodes.
pub const DEFAULT_TREE_NODES: usize = 2_000_000;

/// Builds a decision tree for a system whose non-Boolean axioms are clause
/// translations. Each step branches on a variable of an unsatisfied clause
/// with fewest open literals, trying first the value that falsifies that
/// literal. Returns `None` when some branch satisfies every clause.
pub fn decision_tree(s: &PolySystem, max_nodes: usize) -> Result<Option<DecisionTree>> {
    let mut clauses: Vec<(usize, Clause)> = Vec::new();
    for (i, e) in s.entries().iter().enumerate() {
        if e.kind == Kind::Boolean {
            continue;
        }
        if e.poly.is_zero() {
            continue;
        }
        if e.poly.is_constant() {
            return Ok(Some(DecisionTree::Leaf { axiom: i }));
        }
        let c = as_clause(&e.poly).ok_or_else(|| {
            Error::Shape(format!("axiom `{}` is not a clause translation", e.poly))
        })?;
        clauses.push((i, c));
    }
    let mut assign: HashMap<Var, bool> = HashMap::new();
    let mut nodes = 0usize;
    grow(&clauses, &mut assign, &mut nodes, max_nodes)
}

fn grow(
    clauses: &[(usize, Clause)],
    assign: &mut HashMap<Var, bool>,
    nodes: &mut usize,
    max_nodes: usize,
) -> Result<Option<DecisionTree>> {
    *nodes += 1;
    if *nodes > max_nodes {
        return Err(Error::Budget(format!(
            "decision tree exceeds {max_nodes} nodes"
        )));
    }
    let mut best: Option<(usize, Var, bool)> = None;
    for (i, c) in clauses {
        let mut open = 0;
        let mut first = None;
        let mut sat = false;
        for l in c.literals() {
            match assign.get(&l.var) {
                Some(b) if *b == l.positive => {
                    sat = true;
                    break;
                }
                Some(_) => {}
                None => {
                    open += 1;
                    if first.is_none() {
                        first = Some(*l);
                    }
                }
            }
        }
        if sat {
            continue;
        }
        if open == 0 {
            return Ok(Some(DecisionTree::Leaf { axiom: *i }));
        }
        if best.map(|(k, _, _)| open < k).unwrap_or(true) {
            let l = first.expect("open literal");
            best = Some((open, l.var, !l.positive));
        }
    }
    let Some((_, var, falsify)) = best else {
        return Ok(None);
    };
    let mut sub = [None, None];
    for value in [falsify, !falsify] {
        assign.insert(var, value);
        let t = grow(clauses, assign, nodes, max_nodes)?;
        assign.remove(&var);
        match t {
            Some(t) => sub[value as usize] = Some(t),
            None => return Ok(None),
        }
    }
    let [zero, one] = sub;
    Ok(Some(DecisionTree::Node {
        var,
        zero: Box::new(zero.expect("built")),
        one: Box::new(one.expect("built")),
    }))
}

/// Turns a decision tree into a certificate: the path indicators sum to 1,
/// and each leaf's indicator is a monomial-like product times the falsified
/// clause's translation. Every coefficient is a sum of width-1 products.
pub fn tree_certificate(
    s: &PolySystem,
    tree: &DecisionTree,
    order: &[Var],
) -> Result<LinearIpsCertificate> {
    let ring = s.ring();
    let field = s.field();
    let mut terms: Vec<Vec<(FieldElement, HashMap<Var, UniPoly>)>> = vec![Vec::new(); s.len()];
    let mut failure = None;
    tree.for_each_leaf(&mut |axiom, path| {
        let p = &s.entries()[axiom].poly;
        let (lead, clause_vars) = match as_clause(p) {
            Some(c) => (
                p.terms().next().expect("nonzero").1.clone(),
                c.vars().collect::<Vec<_>>(),
            ),
            None if p.is_constant() && !p.is_zero() => (p.constant_term(), Vec::new()),
            None => {
                failure = Some(axiom);
                return;
            }
        };
        let scale = lead.inv().expect("nonzero leading coefficient");
        let factors: HashMap<Var, UniPoly> = path
            .iter()
            .filter(|(v, _)| !clause_vars.contains(v))
            .map(|(v, b)| {
                let f = if *b {
                    UniPoly::x(field)
                } else {
                    UniPoly::linear(field.one(), -&field.one())
                };
                (*v, f)
            })
            .collect();
        terms[axiom].push((scale, factors));
    });
    if let Some(a) = failure {
        return Err(Error::Shape(format!(
            "leaf axiom {a} is not a clause translation"
        )));
    }
    let coefficients = terms
        .iter()
        .map(|t| Roabp::sum_of_products(ring, order, t))
        .collect::<Result<Vec<_>>>()?;
    LinearIpsCertificate::refutation(s.clone(), order.to_vec(), coefficients)
}

/// Decision-tree refutation of a clause system, or `None` if satisfiable.
pub fn refute_by_search(s: &PolySystem, order: &[Var]) -> Result<Option<LinearIpsCertificate>> {
    match decision_tree(s, DEFAULT_TREE_NODES)? {
        None => Ok(None),
        Some(t) => Ok(Some(tree_certificate(s, &t, order)?)),
    }
}
