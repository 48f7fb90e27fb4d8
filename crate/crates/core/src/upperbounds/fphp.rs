//! The functional pigeonhole principle with `n + 1` pigeons and `n` holes.
//!
//! Each pigeon axiom yields `1 - sum_k x_ik` through
//! `1 - sum_k x_ik = prod_k (1 - x_ik) - sum_{k<l} x_ik x_il prod_{l'>l} (1 - x_il')`.
//! Summing over pigeons gives `n + 1 - sum_k y_k` with hole counts
//! `y_k = sum_i x_ik`. A symmetric multilinear `g` in `y` with value
//! `1 / (n + 1 - s)` at weight `s` inverts it modulo `y_k^2 - y_k`; the
//! quotients come from Boolean reduction, `y_k` is then replaced by its
//! sum, and `y_k^2 - y_k` is paid for by hole and Boolean axioms.

use std::collections::HashMap;

use crate::algebra::{PolyRing, SparsePoly, Var};
use crate::certificate::LinearIpsCertificate;
use crate::error::{Error, Result};
use crate::formulas::{translate_cnf, Clause, Cnf, Literal};
use crate::roabp::{Layer, Roabp, UniPoly, DEFAULT_EXPANSION_BUDGET};

/// The formula and its variables `x[i][k]` (pigeon `i`, hole `k`, both
/// 0-based), declared in hole-major order. Clauses: pigeon clauses, then
/// hole clauses `~x_ik | ~x_jk`, then functionality clauses `~x_ik | ~x_il`.
pub fn fphp(ring: &PolyRing, n: usize) -> Result<(Cnf, Vec<Vec<Var>>)> {
    if n == 0 {
        return Err(Error::Invalid("need at least one hole".into()));
    }
    let x: Vec<Vec<Var>> = (0..=n)
        .map(|i| {
            (0..n)
                .map(|k| ring.var(&format!("x{}_{}", i + 1, k + 1)))
                .collect()
        })
        .collect();
    let order: Vec<Var> = (0..n)
        .flat_map(|k| (0..=n).map(move |i| (i, k)))
        .map(|(i, k)| x[i][k])
        .collect();
    let mut f = Cnf::with_vars(ring, order);
    for row in &x {
        f.push(Clause::new(row.iter().map(|v| Literal::pos(*v)).collect())?);
    }
    for k in 0..n {
        for i in 0..=n {
            for j in i + 1..=n {
                f.push(Clause::new(vec![
                    Literal::neg(x[i][k]),
                    Literal::neg(x[j][k]),
                ])?);
            }
        }
    }
    for row in &x {
        for k in 0..n {
            for l in k + 1..n {
                f.push(Clause::new(vec![
                    Literal::neg(row[k]),
                    Literal::neg(row[l]),
                ])?);
            }
        }
    }
    Ok((f, x))
}

/// Checks the pigeon identity for every pigeon by expansion.
pub fn pigeon_identity_holds(ring: &PolyRing, n: usize) -> Result<bool> {
    let (_, x) = fphp(ring, n)?;
    for row in &x {
        let one = SparsePoly::one(ring);
        let lhs = row
            .iter()
            .fold(one.clone(), |acc, v| &acc - &SparsePoly::var(ring, *v));
        let comp = |v: Var| SparsePoly::one_minus(ring, v);
        let mut rhs = row.iter().fold(one.clone(), |acc, v| &acc * &comp(*v));
        for k in 0..n {
            for l in k + 1..n {
                let tail = row[l + 1..]
                    .iter()
                    .fold(one.clone(), |acc, v| &acc * &comp(*v));
                let t = &(&SparsePoly::var(ring, row[k]) * &SparsePoly::var(ring, row[l])) * &tail;
                rhs = &rhs - &t;
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct FphpRefutation {
    pub certificate: LinearIpsCertificate,
    /// Width of `g` before and after replacing the counts by sums.
    pub g_width: (usize, usize),
    /// `4 (n + 1)^2`.
    pub width_bound: usize,
}

/// Width-`(n+1)` program in `y` that tracks the count of ones and ends
/// with weight `1 / (n + 1 - count)`.
fn count_inverse(ring: &PolyRing, y: &[Var]) -> Result<Roabp> {
    let field = ring.field();
    let n = y.len();
    let w = n + 1;
    let weight = |s: usize| {
        field
            .from_u64((n + 1 - s) as u64)
            .inv()
            .expect("characteristic exceeds n + 1")
    };
    let stay = UniPoly::linear(field.one(), -&field.one());
    let step = UniPoly::x(field);
    let mut layers = Vec::with_capacity(n);
    for k in 0..n {
        let rows = if k == 0 { 1 } else { w };
        let cols = if k == n - 1 { 1 } else { w };
        let mut l = Layer::zeros(rows, cols);
        for s in 0..rows {
            if k == n - 1 {
                let mut lab = stay.scale(&weight(s));
                if s < n {
                    lab = lab.add(&step.scale(&weight(s + 1)));
                }
                l.set(s, 0, lab);
            } else {
                l.set(s, s, stay.clone());
                if s + 1 < w {
                    l.set(s, s + 1, step.clone());
                }
            }
        }
        layers.push(l);
    }
    Roabp::from_layers(ring, y.to_vec(), layers)
}

pub fn refute_fphp(ring: &PolyRing, n: usize) -> Result<FphpRefutation> {
    let field = ring.field();
    let ch = field.characteristic();
    if ch != 0 && ch <= (n + 1) as u64 {
        return Err(Error::Characteristic(format!(
            "need characteristic 0 or above {}",
            n + 1
        )));
    }
    let (f, x) = fphp(ring, n)?;
    let system = translate_cnf(&f);
    let y: Vec<Var> = (0..n).map(|_| ring.fresh("hole")).collect();
    let g = count_inverse(ring, &y)?;
    let mut lin = SparsePoly::from_i64(ring, (n + 1) as i64);
    for v in &y {
        lin = &lin - &SparsePoly::var(ring, *v);
    }
    let lin = Roabp::from_sparse(&lin, &y)?;
    let gap = g.mul(&lin)?.add(&Roabp::one(ring, &y).neg())?;
    let (residual, quotients) = gap.boolean_reduce(&y);
    if !residual
        .expand(DEFAULT_EXPANSION_BUDGET)?
        .multilinearize(|_| true)
        .is_zero()
    {
        return Err(Error::Invalid(
            "count inverse does not invert the pigeon sum".into(),
        ));
    }
    let columns: Vec<Vec<Var>> = (0..n).map(|k| (0..=n).map(|i| x[i][k]).collect()).collect();
    let spread = |p: &Roabp| -> Result<Roabp> {
        let mut p = p.clone();
        for (k, v) in y.iter().enumerate() {
            p = p.substitute_sum(*v, &columns[k])?;
        }
        Ok(p)
    };
    let gx = spread(&g)?;
    let h: HashMap<Var, Roabp> = quotients
        .iter()
        .map(|(v, q)| Ok((*v, spread(q)?)))
        .collect::<Result<_>>()?;
    let order = gx.order().to_vec();
    let zero = Roabp::zero(ring, &order);
    let mut coefficients = vec![zero.clone(); system.len()];
    let mut at = 0;
    // pigeon clauses
    for _ in 0..=n {
        coefficients[at] = gx.clone();
        at += 1;
    }
    // hole clauses: -2 h_k
    for k in 0..n {
        let hk = h
            .get(&y[k])
            .cloned()
            .unwrap_or_else(|| zero.clone())
            .scale(&field.from_i64(-2));
        for _ in 0..n * (n + 1) / 2 {
            coefficients[at] = hk.clone();
            at += 1;
        }
    }
    // functionality clauses: -g * prod_{l' > l} (1 - x_il')
    for row in &x {
        for _k in 0..n {
            for l in _k + 1..n {
                let tail: HashMap<Var, UniPoly> = row[l + 1..]
                    .iter()
                    .map(|v| (*v, UniPoly::linear(field.one(), -&field.one())))
                    .collect();
                let t = Roabp::product(ring, &order, &tail, -&field.one())?;
                coefficients[at] = gx.mul(&t)?;
                at += 1;
            }
        }
    }
    // Boolean axioms in hole-major order: -h_k
    for (b, v) in f.vars().iter().enumerate() {
        let k = b / (n + 1);
        debug_assert_eq!(x[b % (n + 1)][k], *v);
        coefficients[at] = h.get(&y[k]).cloned().unwrap_or_else(|| zero.clone()).neg();
        at += 1;
    }
    debug_assert_eq!(at, system.len());
    let certificate = LinearIpsCertificate::refutation(system, order, coefficients)?;
    Ok(FphpRefutation {
        g_width: (g.width(), gx.width()),
        width_bound: 4 * (n + 1) * (n + 1),
        certificate,
    })
}
