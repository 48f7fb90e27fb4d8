//! Row-sparse matrices of univariate labels (one roABP layer) and of scalars.

use super::unipoly::UniPoly;
use crate::algebra::{Field, FieldElement};

/// A `rows x cols` matrix; each row stores its nonzero `(col, label)` pairs
/// sorted by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub(crate) rows: usize,
    pub(crate) cols: usize,
    pub(crate) entries: Vec<Vec<(usize, UniPoly)>>,
}

impl Layer {
    pub fn zeros(rows: usize, cols: usize) -> Layer {
        Layer {
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn single(label: UniPoly) -> Layer {
        let mut l = Layer::zeros(1, 1);
        l.set(0, 0, label);
        l
    }

    pub fn identity(n: usize, field: Field) -> Layer {
        let mut l = Layer::zeros(n, n);
        for i in 0..n {
            l.set(i, i, UniPoly::constant(field.one()));
        }
        l
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, UniPoly)] {
        &self.entries[r]
    }

    /// Overwrites entry `(r, c)`; zero labels are not stored.
    pub fn set(&mut self, r: usize, c: usize, label: UniPoly) {
        let row = &mut self.entries[r];
        match row.binary_search_by_key(&c, |(k, _)| *k) {
            Ok(i) => {
                if label.is_zero() {
                    row.remove(i);
                } else {
                    row[i].1 = label;
                }
            }
            Err(i) => {
                if !label.is_zero() {
                    row.insert(i, (c, label));
                }
            }
        }
    }

    pub fn get(&self, r: usize, c: usize) -> UniPoly {
        self.entries[r]
            .binary_search_by_key(&c, |(k, _)| *k)
            .map(|i| self.entries[r][i].1.clone())
            .unwrap_or_else(|_| UniPoly::zero())
    }

    pub fn add_at(&mut self, r: usize, c: usize, label: &UniPoly) {
        let cur = self.get(r, c);
        self.set(r, c, cur.add(label));
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.is_empty())
    }

    pub fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .flat_map(|r| r.iter().map(|(_, l)| l.degree()))
            .max()
            .unwrap_or(0)
    }

    pub fn map<F: Fn(&UniPoly) -> UniPoly>(&self, f: F) -> Layer {
        let mut out = Layer::zeros(self.rows, self.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for (c, l) in row {
                out.set(r, *c, f(l));
            }
        }
        out
    }

    pub fn kron(&self, other: &Layer) -> Layer {
        let mut out = Layer::zeros(self.rows * other.rows, self.cols * other.cols);
        for (r1, row1) in self.entries.iter().enumerate() {
            for (c1, a) in row1 {
                for (r2, row2) in other.entries.iter().enumerate() {
                    for (c2, b) in row2 {
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, a.mul(b));
                    }
                }
            }
        }
        out
    }

    /// Evaluates every label at `x`.
    pub fn eval(&self, x: &FieldElement) -> ScalarMatrix {
        let mut m = ScalarMatrix::zeros(self.rows, self.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for (c, l) in row {
                let v = l.eval(x);
                if !v.is_zero() {
                    m.entries[r].push((*c, v));
                }
            }
        }
        m
    }

    /// For a sparse row vector `v`, the vectors `v * A_d` where
    /// `self = sum_d A_d * t^d`.
    pub fn row_times_coefficients(
        &self,
        v: &[(u32, FieldElement)],
    ) -> Vec<Vec<(u32, FieldElement)>> {
        let deg = self.max_degree();
        let mut acc: Vec<std::collections::BTreeMap<u32, FieldElement>> =
            vec![Default::default(); deg + 1];
        for (r, a) in v {
            for (c, l) in &self.entries[*r as usize] {
                for (d, b) in l.coeffs().iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    let e = acc[d].entry(*c as u32).or_insert_with(|| a.field().zero());
                    *e = &*e + &t;
                }
            }
        }
        acc.into_iter()
            .map(|m| m.into_iter().filter(|(_, x)| !x.is_zero()).collect())
            .collect()
    }

    /// `k * self` for a scalar matrix `k` with `k.cols == self.rows`.
    pub fn left_mul(&self, k: &ScalarMatrix) -> Layer {
        let mut out = Layer::zeros(k.rows, self.cols);
        for (r, krow) in k.entries.iter().enumerate() {
            for (m, a) in krow {
                for (c, l) in &self.entries[*m] {
                    out.add_at(r, *c, &l.scale(a));
                }
            }
        }
        out
    }

    /// `self * k` for a scalar matrix `k` with `k.rows == self.cols`.
    pub fn right_mul(&self, k: &ScalarMatrix) -> Layer {
        let mut out = Layer::zeros(self.rows, k.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for (m, l) in row {
                for (c, a) in &k.entries[*m] {
                    out.add_at(r, *c, &l.scale(a));
                }
            }
        }
        out
    }
}

/// Row-sparse matrix of field constants; appears when labels are evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    pub(crate) rows: usize,
    pub(crate) cols: usize,
    pub(crate) entries: Vec<Vec<(usize, FieldElement)>>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> ScalarMatrix {
        ScalarMatrix {
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn mul(&self, other: &ScalarMatrix) -> ScalarMatrix {
        let mut out = ScalarMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.entries.iter().enumerate() {
            let mut acc: Vec<Option<FieldElement>> = vec![None; other.cols];
            for (m, a) in row {
                for (c, b) in &other.entries[*m] {
                    let t = a * b;
                    acc[*c] = Some(match acc[*c].take() {
                        Some(s) => &s + &t,
                        None => t,
                    });
                }
            }
            out.entries[r] = acc
                .into_iter()
                .enumerate()
                .filter_map(|(c, v)| v.filter(|v| !v.is_zero()).map(|v| (c, v)))
                .collect();
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[FieldElement], field: Field) -> Vec<FieldElement> {
        let mut out = vec![field.zero(); self.cols];
        for (r, row) in self.entries.iter().enumerate() {
            if v[r].is_zero() {
                continue;
            }
            for (c, a) in row {
                out[*c] = &out[*c] + &(&v[r] * a);
            }
        }
        out
    }

    pub fn entry(&self, r: usize, c: usize, field: Field) -> FieldElement {
        self.entries[r]
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| field.zero())
    }
}
