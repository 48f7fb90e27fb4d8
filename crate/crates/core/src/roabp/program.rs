use std::collections::{HashMap, HashSet};

use rand::Rng;

use super::layer::{Layer, ScalarMatrix};
use super::unipoly::UniPoly;
use crate::algebra::{
    Field, FieldElement, Monomial, PolyRing, SpanBasis, SparsePoly, SparseVec, Var,
};
use crate::error::{Error, Result};

/// Default term budget for expansions.
pub const DEFAULT_EXPANSION_BUDGET: usize = 200_000;

/// A read-once oblivious algebraic branching program: the polynomial is the
/// single entry of `M_1 * ... * M_n`, where layer `i` has labels univariate
/// in `order[i]`. The first layer has one row and the last one column.
/// With an empty order the program is the constant `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roabp {
    pub(crate) ring: PolyRing,
    pub(crate) order: Vec<Var>,
    pub(crate) layers: Vec<Layer>,
    pub(crate) value: FieldElement,
}

/// Prefix/suffix slicing of a program at a layer boundary.
#[derive(Clone, Debug)]
pub struct CutDecomposition {
    pub cut_index: usize,
    pub prefix: Vec<SparsePoly>,
    pub suffix: Vec<SparsePoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PitMode {
    /// Compare expanded polynomials.
    Expand { budget: usize },
    /// Compare values at random points.
    Randomized { trials: usize, seed: u64 },
    /// Deterministic zero test of the difference by tracking the span of
    /// prefix coefficient vectors layer by layer; never expands.
    Exact,
}

impl Roabp {
    /// Builds a program from explicit layers, checking the shape invariants.
    pub fn from_layers(ring: &PolyRing, order: Vec<Var>, layers: Vec<Layer>) -> Result<Roabp> {
        if order.is_empty() {
            return Err(Error::MalformedProgram(
                "use Roabp::constant for an empty order".into(),
            ));
        }
        let p = Roabp {
            ring: ring.clone(),
            order,
            layers,
            value: ring.one(),
        };
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.layers.len() != self.order.len() {
            return Err(Error::MalformedProgram(format!(
                "{} layers for {} variables",
                self.layers.len(),
                self.order.len()
            )));
        }
        let distinct: HashSet<Var> = self.order.iter().copied().collect();
        if distinct.len() != self.order.len() {
            return Err(Error::MalformedProgram("order repeats a variable".into()));
        }
        let mut prev = 1;
        for (i, l) in self.layers.iter().enumerate() {
            if l.rows != prev {
                return Err(Error::MalformedProgram(format!(
                    "layer {i} has {} rows, expected {prev}",
                    l.rows
                )));
            }
            if l.cols == 0 {
                return Err(Error::MalformedProgram(format!("layer {i} has no columns")));
            }
            prev = l.cols;
        }
        if !self.layers.is_empty() && prev != 1 {
            return Err(Error::MalformedProgram(
                "last layer must have one column".into(),
            ));
        }
        Ok(())
    }

    /// The constant `c` over `order` (width 1).
    pub fn constant(ring: &PolyRing, order: &[Var], c: FieldElement) -> Roabp {
        let field = ring.field();
        if order.is_empty() {
            return Roabp {
                ring: ring.clone(),
                order: Vec::new(),
                layers: Vec::new(),
                value: c,
            };
        }
        let mut layers: Vec<Layer> = order
            .iter()
            .map(|_| Layer::single(UniPoly::constant(field.one())))
            .collect();
        layers[0] = Layer::single(UniPoly::constant(c));
        Roabp {
            ring: ring.clone(),
            order: order.to_vec(),
            layers,
            value: field.one(),
        }
    }

    pub fn zero(ring: &PolyRing, order: &[Var]) -> Roabp {
        Roabp::constant(ring, order, ring.zero())
    }

    pub fn one(ring: &PolyRing, order: &[Var]) -> Roabp {
        Roabp::constant(ring, order, ring.one())
    }

    /// Width-1 program `scalar * prod_v factors[v](v)`; variables without a
    /// factor read the label 1.
    pub fn product(
        ring: &PolyRing,
        order: &[Var],
        factors: &HashMap<Var, UniPoly>,
        scalar: FieldElement,
    ) -> Result<Roabp> {
        for v in factors.keys() {
            if !order.contains(v) {
                return Err(Error::VariableOutsideOrder(ring.name(*v)));
            }
        }
        let mut p = Roabp::one(ring, order);
        for (i, v) in order.iter().enumerate() {
            if let Some(f) = factors.get(v) {
                p.layers[i] = Layer::single(f.clone());
            }
        }
        Ok(p.scale(&scalar))
    }

    /// Builds a program for a sparse polynomial: a prefix trie of monomials
    /// up to a pivot layer and a suffix trie after it, with the pivot chosen
    /// to minimise the width. The width is at most the sparsity of `p`.
    pub fn from_sparse(p: &SparsePoly, order: &[Var]) -> Result<Roabp> {
        let ring = p.ring().clone();
        let field = ring.field();
        let pos: HashMap<Var, usize> = order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        for v in p.variables() {
            if !pos.contains_key(&v) {
                return Err(Error::VariableOutsideOrder(ring.name(v)));
            }
        }
        if order.is_empty() {
            return Ok(Roabp::constant(&ring, order, p.constant_term()));
        }
        if p.is_zero() {
            return Ok(Roabp::zero(&ring, order));
        }
        let n = order.len();
        // exponent vectors in order positions
        let rows: Vec<(Vec<u32>, FieldElement)> = p
            .terms()
            .map(|(m, c)| (order.iter().map(|v| m.exponent(*v)).collect(), c.clone()))
            .collect();
        // prefix states at boundary b: distinct e[..b]; suffix states: distinct e[b..]
        let mut prefix: Vec<HashMap<&[u32], usize>> = vec![HashMap::new(); n + 1];
        let mut suffix: Vec<HashMap<&[u32], usize>> = vec![HashMap::new(); n + 1];
        for (e, _) in &rows {
            for b in 0..=n {
                let k = prefix[b].len();
                prefix[b].entry(&e[..b]).or_insert(k);
                let k = suffix[b].len();
                suffix[b].entry(&e[b..]).or_insert(k);
            }
        }
        // pivot layer k: boundaries <= k use prefixes, boundaries > k suffixes
        let cost = |k: usize| -> usize {
            let a = (0..=k).map(|b| prefix[b].len()).max().unwrap_or(1);
            let c = (k + 1..=n).map(|b| suffix[b].len()).max().unwrap_or(1);
            a.max(c)
        };
        let k = (0..n)
            .min_by_key(|&k| (cost(k), k))
            .expect("nonempty order");
        let dim = |b: usize| {
            if b <= k {
                prefix[b].len()
            } else {
                suffix[b].len()
            }
        };
        let mut layers: Vec<Layer> = (0..n).map(|i| Layer::zeros(dim(i), dim(i + 1))).collect();
        for (e, c) in &rows {
            for i in 0..n {
                let from = if i <= k {
                    prefix[i][&e[..i]]
                } else {
                    suffix[i][&e[i..]]
                };
                let to = if i < k {
                    prefix[i + 1][&e[..=i]]
                } else {
                    suffix[i + 1][&e[i + 1..]]
                };
                let ex = e[i] as usize;
                if i == k {
                    layers[i].add_at(from, to, &UniPoly::monomial(c.clone(), ex, field));
                } else {
                    layers[i].set(from, to, UniPoly::monomial(field.one(), ex, field));
                }
            }
        }
        let mut out = Roabp::from_layers(&ring, order.to_vec(), layers)?;
        if out.layers.iter().any(|l| l.is_zero()) {
            out = Roabp::zero(&ring, order);
        }
        Ok(out)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn order(&self) -> &[Var] {
        &self.order
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Largest matrix dimension; at least 1.
    pub fn width(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.rows.max(l.cols))
            .max()
            .unwrap_or(1)
            .max(1)
    }

    /// Upper bound on the total degree: the sum of per-layer label degrees.
    pub fn degree_bound(&self) -> usize {
        self.layers.iter().map(|l| l.max_degree()).sum()
    }

    /// True for the program built by [`Roabp::one`] (every label the constant 1).
    pub fn is_constant_one(&self) -> bool {
        if self.layers.is_empty() {
            return self.value.is_one();
        }
        self.layers.iter().all(|l| {
            l.rows == 1 && l.cols == 1 && l.get(0, 0) == UniPoly::constant(self.field().one())
        })
    }

    /// True when some layer is the zero matrix, so the program computes 0.
    pub fn is_structurally_zero(&self) -> bool {
        if self.layers.is_empty() {
            return self.value.is_zero();
        }
        self.layers.iter().any(|l| l.is_zero())
    }

    fn row_times_layer(&self, v: &[SparsePoly], l: &Layer, var: Var) -> Vec<SparsePoly> {
        let mut out = vec![SparsePoly::zero(&self.ring); l.cols];
        for (r, row) in l.entries.iter().enumerate() {
            if v[r].is_zero() {
                continue;
            }
            for (c, lab) in row {
                let t = times_label(&v[r], lab, var);
                out[*c] = &out[*c] + &t;
            }
        }
        out
    }

    fn layer_times_col(&self, l: &Layer, v: &[SparsePoly], var: Var) -> Vec<SparsePoly> {
        let mut out = vec![SparsePoly::zero(&self.ring); l.rows];
        for (r, row) in l.entries.iter().enumerate() {
            for (c, lab) in row {
                if v[*c].is_zero() {
                    continue;
                }
                let t = times_label(&v[*c], lab, var);
                out[r] = &out[r] + &t;
            }
        }
        out
    }

    /// The polynomial computed, failing once an intermediate vector holds
    /// more than `budget` terms.
    pub fn expand(&self, budget: usize) -> Result<SparsePoly> {
        if self.layers.is_empty() {
            return Ok(SparsePoly::constant(&self.ring, self.value.clone()));
        }
        let (prefix, _) = self.prefix_row(self.layers.len(), budget)?;
        Ok(prefix.into_iter().next().expect("one column"))
    }

    fn prefix_row(&self, t: usize, budget: usize) -> Result<(Vec<SparsePoly>, usize)> {
        let mut v = vec![SparsePoly::one(&self.ring)];
        for i in 0..t {
            v = self.row_times_layer(&v, &self.layers[i], self.order[i]);
            let size: usize = v.iter().map(|p| p.sparsity()).sum();
            if size > budget {
                return Err(Error::ExpansionTooLarge(budget));
            }
        }
        let n = v.len();
        Ok((v, n))
    }

    fn suffix_col(&self, t: usize, budget: usize) -> Result<Vec<SparsePoly>> {
        let mut v = vec![SparsePoly::one(&self.ring)];
        for i in (t..self.layers.len()).rev() {
            v = self.layer_times_col(&self.layers[i], &v, self.order[i]);
            let size: usize = v.iter().map(|p| p.sparsity()).sum();
            if size > budget {
                return Err(Error::ExpansionTooLarge(budget));
            }
        }
        Ok(v)
    }

    /// Evaluates at a point given as a function of the variable.
    pub fn eval<F: Fn(Var) -> FieldElement>(&self, point: F) -> FieldElement {
        let field = self.field();
        if self.layers.is_empty() {
            return self.value.clone();
        }
        let mut v = vec![field.one()];
        for (l, var) in self.layers.iter().zip(&self.order) {
            v = l.eval(&point(*var)).apply_row(&v, field);
        }
        v.into_iter().next().expect("one column")
    }

    fn check_same_order(&self, other: &Roabp) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(format!(
                "{:?} vs {:?}",
                self.ring.names(&self.order),
                self.ring.names(&other.order)
            )));
        }
        Ok(())
    }

    /// Direct sum: width at most `width(A) + width(B)`.
    pub fn add(&self, other: &Roabp) -> Result<Roabp> {
        self.check_same_order(other)?;
        if self.is_structurally_zero() {
            return Ok(other.clone());
        }
        if other.is_structurally_zero() {
            return Ok(self.clone());
        }
        let n = self.layers.len();
        if n == 0 {
            return Ok(Roabp::constant(&self.ring, &[], &self.value + &other.value));
        }
        if n == 1 {
            let l = self.layers[0].get(0, 0).add(&other.layers[0].get(0, 0));
            return Roabp::from_layers(&self.ring, self.order.clone(), vec![Layer::single(l)]);
        }
        let mut layers = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (&self.layers[i], &other.layers[i]);
            let rows = if i == 0 { 1 } else { a.rows + b.rows };
            let cols = if i == n - 1 { 1 } else { a.cols + b.cols };
            let mut l = Layer::zeros(rows, cols);
            let (ro, co) = (
                if i == 0 { 0 } else { a.rows },
                if i == n - 1 { 0 } else { a.cols },
            );
            for (r, row) in a.entries.iter().enumerate() {
                for (c, lab) in row {
                    l.add_at(r, *c, lab);
                }
            }
            for (r, row) in b.entries.iter().enumerate() {
                for (c, lab) in row {
                    l.add_at(r + ro, c + co, lab);
                }
            }
            layers.push(l);
        }
        Roabp::from_layers(&self.ring, self.order.clone(), layers)
    }

    /// Sum of many programs in one order.
    pub fn sum<'a, I: IntoIterator<Item = &'a Roabp>>(
        ring: &PolyRing,
        order: &[Var],
        it: I,
    ) -> Result<Roabp> {
        let mut acc = Roabp::zero(ring, order);
        for p in it {
            acc = acc.add(p)?;
        }
        Ok(acc)
    }

    /// Layer-wise Kronecker product: width at most `width(A) * width(B)`.
    pub fn mul(&self, other: &Roabp) -> Result<Roabp> {
        self.check_same_order(other)?;
        if self.is_structurally_zero() || other.is_structurally_zero() {
            return Ok(Roabp::zero(&self.ring, &self.order));
        }
        if self.layers.is_empty() {
            return Ok(Roabp::constant(&self.ring, &[], &self.value * &other.value));
        }
        let layers = self
            .layers
            .iter()
            .zip(&other.layers)
            .map(|(a, b)| a.kron(b))
            .collect();
        Roabp::from_layers(&self.ring, self.order.clone(), layers)
    }

    pub fn scale(&self, c: &FieldElement) -> Roabp {
        let mut p = self.clone();
        if p.layers.is_empty() {
            p.value = &p.value * c;
        } else {
            p.layers[0] = p.layers[0].map(|l| l.scale(c));
        }
        p
    }

    pub fn neg(&self) -> Roabp {
        self.scale(&-&self.field().one())
    }

    /// Multiplies by the variable `v` by scaling its layer; width unchanged.
    pub fn mul_var(&self, v: Var) -> Result<Roabp> {
        let i = self
            .order
            .iter()
            .position(|w| *w == v)
            .ok_or_else(|| Error::VariableOutsideOrder(self.ring.name(v)))?;
        let mut p = self.clone();
        let x = UniPoly::x(self.field());
        p.layers[i] = p.layers[i].map(|l| l.mul(&x));
        Ok(p)
    }

    /// Multiplies the layer of `v` entrywise by a univariate polynomial in `v`.
    pub fn mul_univariate(&self, v: Var, f: &UniPoly) -> Result<Roabp> {
        let i = self
            .order
            .iter()
            .position(|w| *w == v)
            .ok_or_else(|| Error::VariableOutsideOrder(self.ring.name(v)))?;
        let mut p = self.clone();
        p.layers[i] = p.layers[i].map(|l| l.mul(f));
        Ok(p)
    }

    /// Re-expresses the program in a longer order containing the current one
    /// as a subsequence; new variables read trivial width-preserving layers.
    pub fn extend_order(&self, new_order: &[Var]) -> Result<Roabp> {
        let field = self.field();
        if self.layers.is_empty() {
            return Ok(Roabp::constant(&self.ring, new_order, self.value.clone()));
        }
        let mut layers = Vec::with_capacity(new_order.len());
        let mut k = 0;
        let mut dim = 1;
        for v in new_order {
            if k < self.order.len() && self.order[k] == *v {
                dim = self.layers[k].cols;
                layers.push(self.layers[k].clone());
                k += 1;
            } else {
                layers.push(Layer::identity(dim, field));
            }
        }
        if k != self.order.len() {
            return Err(Error::OrderMismatch(format!(
                "{:?} is not a subsequence of {:?}",
                self.ring.names(&self.order),
                self.ring.names(new_order)
            )));
        }
        Roabp::from_layers(&self.ring, new_order.to_vec(), layers)
    }

    /// Substitutes constants for the variables in `sigma` and renames
    /// survivors by `rho`. Constant layers are folded into a neighbour, so no
    /// dimension grows.
    pub fn restrict(
        &self,
        sigma: &HashMap<Var, FieldElement>,
        rho: &HashMap<Var, Var>,
    ) -> Result<Roabp> {
        let field = self.field();
        let survivors: Vec<Var> = self
            .order
            .iter()
            .copied()
            .filter(|v| !sigma.contains_key(v))
            .collect();
        let renamed: Vec<Var> = survivors.iter().map(|v| *rho.get(v).unwrap_or(v)).collect();
        let distinct: HashSet<Var> = renamed.iter().copied().collect();
        if distinct.len() != renamed.len() {
            return Err(Error::NonInjectiveRenaming(format!(
                "{:?} -> {:?}",
                self.ring.names(&survivors),
                self.ring.names(&renamed)
            )));
        }
        if self.layers.is_empty() {
            return Ok(self.clone());
        }
        let mut out: Vec<Layer> = Vec::new();
        let mut pending: Option<ScalarMatrix> = None;
        for (l, v) in self.layers.iter().zip(&self.order) {
            match sigma.get(v) {
                Some(c) => {
                    let m = l.eval(c);
                    pending = Some(match pending.take() {
                        Some(k) => k.mul(&m),
                        None => m,
                    });
                }
                None => {
                    let l = match pending.take() {
                        Some(k) => l.left_mul(&k),
                        None => l.clone(),
                    };
                    out.push(l);
                }
            }
        }
        if let Some(k) = pending {
            match out.last_mut() {
                Some(last) => *last = last.right_mul(&k),
                None => {
                    return Ok(Roabp::constant(&self.ring, &[], k.entry(0, 0, field)));
                }
            }
        }
        let p = Roabp {
            ring: self.ring.clone(),
            order: renamed,
            layers: out,
            value: field.one(),
        };
        p.validate()?;
        Ok(p)
    }

    /// Replaces every label `f(v)` by `f(a + b*v)`; width unchanged.
    pub fn substitute_affine(&self, v: Var, a: &FieldElement, b: &FieldElement) -> Result<Roabp> {
        let i = self
            .order
            .iter()
            .position(|w| *w == v)
            .ok_or_else(|| Error::VariableOutsideOrder(self.ring.name(v)))?;
        let mut p = self.clone();
        p.layers[i] = p.layers[i].map(|l| l.compose_affine(a, b));
        Ok(p)
    }

    /// Replaces the layer of `v` by a segment over `parts` computing the same
    /// matrix at `v = parts[0] + ... + parts[m-1]`. A label of degree `D`
    /// costs a factor `D + 1` in width; divided powers require the
    /// characteristic to exceed `D`.
    pub fn substitute_sum(&self, v: Var, parts: &[Var]) -> Result<Roabp> {
        let field = self.field();
        let i = self
            .order
            .iter()
            .position(|w| *w == v)
            .ok_or_else(|| Error::VariableOutsideOrder(self.ring.name(v)))?;
        if parts.is_empty() {
            return self.restrict(&HashMap::from([(v, field.zero())]), &HashMap::new());
        }
        let layer = &self.layers[i];
        let deg = layer.max_degree();
        let ch = field.characteristic();
        if ch != 0 && (deg as u64) >= ch {
            return Err(Error::Characteristic(format!(
                "degree {deg} labels need characteristic > {deg}"
            )));
        }
        let (r, c) = (layer.rows, layer.cols);
        let states = deg + 1;
        // factorial and inverse factorials up to deg
        let mut fact = vec![field.one()];
        for k in 1..=deg {
            fact.push(&fact[k - 1] * &field.from_u64(k as u64));
        }
        let inv_fact: Vec<FieldElement> =
            fact.iter().map(|f| f.inv().expect("char > deg")).collect();
        // coefficient matrices A_d of the label matrix
        let coeff = |row: usize, col: usize, d: usize| -> FieldElement {
            layer
                .get(row, col)
                .coeffs()
                .get(d)
                .cloned()
                .unwrap_or_else(|| field.zero())
        };
        let idx = |row: usize, s: usize| row * states + s;
        let m = parts.len();
        let mut seg = Vec::with_capacity(m);
        for (k, _) in parts.iter().enumerate() {
            let first = k == 0;
            let last = k == m - 1;
            let rows = if first { r } else { r * states };
            let cols = if last { c } else { r * states };
            let mut l = Layer::zeros(rows, cols);
            for row in 0..r {
                for s in 0..states {
                    if first && s > 0 {
                        continue;
                    }
                    let from = if first { row } else { idx(row, s) };
                    if last {
                        for col in 0..c {
                            let mut lab = UniPoly::zero();
                            for e in 0..(states - s) {
                                let a = coeff(row, col, s + e);
                                if a.is_zero() {
                                    continue;
                                }
                                let w = &(&a * &fact[s + e]) * &inv_fact[e];
                                lab = lab.add(&UniPoly::monomial(w, e, field));
                            }
                            l.add_at(from, col, &lab);
                        }
                    } else {
                        for e in 0..(states - s) {
                            l.add_at(
                                from,
                                idx(row, s + e),
                                &UniPoly::monomial(inv_fact[e].clone(), e, field),
                            );
                        }
                    }
                }
            }
            seg.push(l);
        }
        let mut order = self.order[..i].to_vec();
        order.extend_from_slice(parts);
        order.extend_from_slice(&self.order[i + 1..]);
        let mut layers = self.layers[..i].to_vec();
        layers.extend(seg);
        layers.extend_from_slice(&self.layers[i + 1..]);
        let p = Roabp {
            ring: self.ring.clone(),
            order,
            layers,
            value: field.one(),
        };
        p.validate()?;
        Ok(p)
    }

    /// Splits at the boundary after `t` layers, `0 <= t <= n`.
    pub fn split_at(&self, t: usize, budget: usize) -> Result<CutDecomposition> {
        let n = self.layers.len();
        if t > n {
            return Err(Error::CutOutOfRange { t, n });
        }
        if n == 0 {
            return Ok(CutDecomposition {
                cut_index: 0,
                prefix: vec![SparsePoly::one(&self.ring)],
                suffix: vec![SparsePoly::constant(&self.ring, self.value.clone())],
            });
        }
        let (mut prefix, _) = self.prefix_row(t, budget)?;
        let mut suffix = self.suffix_col(t, budget)?;
        let w = self.width();
        prefix.resize(w, SparsePoly::zero(&self.ring));
        suffix.resize(w, SparsePoly::zero(&self.ring));
        Ok(CutDecomposition {
            cut_index: t,
            prefix,
            suffix,
        })
    }

    /// Cut decomposition at an interior boundary, `1 <= t < n`.
    pub fn cut(&self, t: usize, budget: usize) -> Result<CutDecomposition> {
        let n = self.layers.len();
        if t == 0 || t >= n {
            return Err(Error::CutOutOfRange { t, n });
        }
        self.split_at(t, budget)
    }

    /// Writes the program as `residual + sum_v q_v * (v^2 - v)` for the given
    /// variables, with every `v`-label of the residual of degree at most one.
    /// Each quotient keeps the width of the program.
    pub fn boolean_reduce(&self, vars: &[Var]) -> (Roabp, Vec<(Var, Roabp)>) {
        let mut cur = self.clone();
        let mut quotients = Vec::new();
        for (i, v) in self.order.iter().enumerate() {
            if !vars.contains(v) {
                continue;
            }
            let layer = &cur.layers[i];
            if layer.max_degree() <= 1 {
                continue;
            }
            let mut rem = Layer::zeros(layer.rows, layer.cols);
            let mut quot = Layer::zeros(layer.rows, layer.cols);
            for (r, row) in layer.entries.iter().enumerate() {
                for (c, lab) in row {
                    let (a, b) = lab.divide_boolean();
                    rem.set(r, *c, a);
                    quot.set(r, *c, b);
                }
            }
            if !quot.is_zero() {
                let mut q = cur.clone();
                q.layers[i] = quot;
                quotients.push((*v, q));
            }
            cur.layers[i] = rem;
        }
        (cur, quotients)
    }

    /// Deterministic zero test. The coefficient vectors of the prefix
    /// `M_1 * ... * M_i`, one per monomial, span a subspace of dimension at
    /// most the layer width; a basis of it is propagated through every
    /// coefficient matrix of the next layer. The program is zero iff the
    /// final span is `{0}`.
    pub fn is_zero_exact(&self) -> bool {
        if self.layers.is_empty() {
            return self.value.is_zero();
        }
        let field = self.field();
        let mut basis: Vec<SparseVec> = vec![vec![(0, field.one())]];
        for l in &self.layers {
            let mut next = SpanBasis::new(field, false);
            for v in &basis {
                for w in l.row_times_coefficients(v) {
                    if !w.is_empty() {
                        next.insert(0, w);
                    }
                }
            }
            basis = next.vectors();
            if basis.is_empty() {
                return true;
            }
        }
        false
    }

    /// Sum of width-1 products `c * prod_v f_v(v)`, built as one
    /// block-diagonal program of width equal to the number of terms.
    pub fn sum_of_products(
        ring: &PolyRing,
        order: &[Var],
        terms: &[(FieldElement, HashMap<Var, UniPoly>)],
    ) -> Result<Roabp> {
        let field = ring.field();
        let live: Vec<&(FieldElement, HashMap<Var, UniPoly>)> =
            terms.iter().filter(|(c, _)| !c.is_zero()).collect();
        if live.is_empty() || order.is_empty() {
            let mut acc = Roabp::zero(ring, order);
            for (c, f) in &live {
                acc = acc.add(&Roabp::product(ring, order, f, (*c).clone())?)?;
            }
            return Ok(acc);
        }
        for (_, f) in &live {
            for v in f.keys() {
                if !order.contains(v) {
                    return Err(Error::VariableOutsideOrder(ring.name(*v)));
                }
            }
        }
        let n = order.len();
        let k = live.len();
        let one = UniPoly::constant(field.one());
        let mut layers = Vec::with_capacity(n);
        for (i, v) in order.iter().enumerate() {
            let rows = if i == 0 { 1 } else { k };
            let cols = if i == n - 1 { 1 } else { k };
            let mut l = Layer::zeros(rows, cols);
            for (j, (c, f)) in live.iter().enumerate() {
                let mut lab = f.get(v).cloned().unwrap_or_else(|| one.clone());
                if i == 0 {
                    lab = lab.scale(c);
                }
                l.add_at(
                    if i == 0 { 0 } else { j },
                    if i == n - 1 { 0 } else { j },
                    &lab,
                );
            }
            layers.push(l);
        }
        Roabp::from_layers(ring, order.to_vec(), layers)
    }

    /// Polynomial identity test between two programs in the same order.
    ///
    /// Randomized mode evaluates both at independent uniform points; a
    /// nonzero difference survives one trial with probability at most
    /// `deg / |S|` (DeMillo-Lipton-Schwartz-Zippel), where `S` is the whole
    /// prime field or `[0, 2^32)` for the rationals.
    pub fn identity_test(&self, other: &Roabp, mode: PitMode) -> Result<bool> {
        self.check_same_order(other)?;
        if self == other {
            return Ok(true);
        }
        match mode {
            PitMode::Expand { budget } => Ok(self.expand(budget)? == other.expand(budget)?),
            PitMode::Exact => Ok(self.add(&other.neg())?.is_zero_exact()),
            PitMode::Randomized { trials, seed } => {
                let mut rng = crate::rng(seed);
                for _ in 0..trials {
                    let pt: HashMap<Var, FieldElement> = self
                        .order
                        .iter()
                        .map(|v| (*v, random_element(self.field(), &mut rng)))
                        .collect();
                    if self.eval(|v| pt[&v].clone()) != other.eval(|v| pt[&v].clone()) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

impl Roabp {
    /// Random program with interior dimensions in `1..=width` and labels of
    /// degree at most `degree`; each entry is nonzero with probability 2/3.
    pub fn random<R: Rng>(
        ring: &PolyRing,
        order: &[Var],
        width: usize,
        degree: usize,
        rng: &mut R,
    ) -> Roabp {
        let field = ring.field();
        if order.is_empty() {
            return Roabp::constant(ring, order, random_small(field, rng));
        }
        let n = order.len();
        let dims: Vec<usize> = (0..=n)
            .map(|i| {
                if i == 0 || i == n {
                    1
                } else {
                    rng.gen_range(1..=width.max(1))
                }
            })
            .collect();
        let layers = (0..n)
            .map(|i| {
                let mut l = Layer::zeros(dims[i], dims[i + 1]);
                for r in 0..dims[i] {
                    for c in 0..dims[i + 1] {
                        if rng.gen_range(0..3) == 0 {
                            continue;
                        }
                        let d = rng.gen_range(0..=degree);
                        let coeffs = (0..=d).map(|_| random_small(field, rng)).collect();
                        l.set(r, c, UniPoly::from_coeffs(coeffs));
                    }
                }
                l
            })
            .collect();
        Roabp::from_layers(ring, order.to_vec(), layers).expect("consistent dimensions")
    }
}

fn random_small<R: Rng>(field: Field, rng: &mut R) -> FieldElement {
    field.from_i64(rng.gen_range(-3..=3))
}

/// Uniform sample from the field, or from `[0, 2^32)` in rational mode.
pub fn random_element<R: Rng>(field: Field, rng: &mut R) -> FieldElement {
    match field {
        Field::Prime(p) => field.from_u64(rng.gen_range(0..p)),
        Field::Rational => field.from_u64(rng.gen::<u32>() as u64),
    }
}

/// Size of the sample set used by [`random_element`].
pub fn sample_set_size(field: Field) -> f64 {
    match field {
        Field::Prime(p) => p as f64,
        Field::Rational => (1u64 << 32) as f64,
    }
}

fn times_label(p: &SparsePoly, lab: &UniPoly, var: Var) -> SparsePoly {
    let mut out = SparsePoly::zero(p.ring());
    for (k, c) in lab.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out = &out + &p.mul_monomial(&Monomial::pow(var, k as u32), c);
    }
    out
}

/// Free-function form of [`Roabp::expand`].
pub fn roabp_expand(p: &Roabp, budget: usize) -> Result<SparsePoly> {
    p.expand(budget)
}
