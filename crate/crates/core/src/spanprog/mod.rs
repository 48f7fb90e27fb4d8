//! Span programs over polynomial vector spaces.
//!
//! A program is a list of labelled vectors and a target; on an assignment of
//! its z-variables it accepts iff the target lies in the span of the vectors
//! whose labels are true there. Vectors stay polynomials; a monomial basis is
//! built only transiently when a span question is asked.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_poly, span_membership, Field, FieldElement, PolyRing, SparsePoly, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Pos(Var),
    Neg(Var),
    One,
}

impl Label {
    pub fn eval(&self, alpha: &HashMap<Var, bool>) -> Option<bool> {
        match self {
            Label::One => Some(true),
            Label::Pos(v) => alpha.get(v).copied(),
            Label::Neg(v) => alpha.get(v).map(|b| !b),
        }
    }

    pub fn var(&self) -> Option<Var> {
        match self {
            Label::Pos(v) | Label::Neg(v) => Some(*v),
            Label::One => None,
        }
    }

    /// `z1`, `~z1` or `1`.
    pub fn display(&self, ring: &PolyRing) -> String {
        match self {
            Label::One => "1".into(),
            Label::Pos(v) => ring.name(*v),
            Label::Neg(v) => format!("~{}", ring.name(*v)),
        }
    }

    pub fn parse(ring: &PolyRing, s: &str) -> Result<Label> {
        let s = s.trim();
        if s == "1" {
            return Ok(Label::One);
        }
        let (neg, name) = match s.strip_prefix('~') {
            Some(rest) => (true, rest.trim()),
            None => (false, s),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Parse(format!("bad span-program label `{s}`")));
        }
        let v = ring.var(name);
        Ok(if neg { Label::Neg(v) } else { Label::Pos(v) })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanEntry {
    pub label: Label,
    pub vector: SparsePoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanProgram {
    ring: PolyRing,
    pub entries: Vec<SpanEntry>,
    pub target: SparsePoly,
    pub z: Vec<Var>,
}

/// Outcome of one evaluation; `combination` pairs entry indices with the
/// multipliers that produce the target.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanEval {
    pub value: bool,
    pub combination: Option<Vec<(usize, FieldElement)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Desugared {
    pub program: SpanProgram,
    /// Set when the input is monotone and accepts the all-zero assignment, so
    /// it computes the constant-1 function, which no program without constant
    /// labels can compute.
    pub constant_one: bool,
}

impl SpanProgram {
    pub fn new(ring: &PolyRing, z: Vec<Var>, target: SparsePoly) -> SpanProgram {
        SpanProgram {
            ring: ring.clone(),
            entries: Vec::new(),
            target,
            z,
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn push(&mut self, label: Label, vector: SparsePoly) -> Result<()> {
        if vector.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if let Some(v) = label.var() {
            if !self.z.contains(&v) {
                return Err(Error::UnknownVariable(self.ring.name(v)));
            }
        }
        self.entries.push(SpanEntry { label, vector });
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// No entry carries a negative literal. Constant labels are allowed.
    pub fn is_monotone(&self) -> bool {
        !self
            .entries
            .iter()
            .any(|e| matches!(e.label, Label::Neg(_)))
    }

    pub fn prune_zero(&mut self) {
        self.entries.retain(|e| !e.vector.is_zero());
    }

    fn check_total(&self, alpha: &HashMap<Var, bool>) -> Result<()> {
        match self.z.iter().find(|v| !alpha.contains_key(v)) {
            Some(v) => Err(Error::PartialAssignment(self.ring.name(*v))),
            None => Ok(()),
        }
    }

    pub fn selected(&self, alpha: &HashMap<Var, bool>) -> Result<Vec<usize>> {
        self.check_total(alpha)?;
        Ok((0..self.entries.len())
            .filter(|i| self.entries[*i].label.eval(alpha) == Some(true))
            .collect())
    }

    pub fn span_eval(&self, alpha: &HashMap<Var, bool>) -> Result<bool> {
        Ok(self.span_eval_with_witness(alpha)?.value)
    }

    pub fn span_eval_with_witness(&self, alpha: &HashMap<Var, bool>) -> Result<SpanEval> {
        let sel = self.selected(alpha)?;
        let vs: Vec<SparsePoly> = sel
            .iter()
            .map(|i| self.entries[*i].vector.clone())
            .collect();
        let res = span_membership(&vs, &self.target)?;
        Ok(SpanEval {
            value: res.inside,
            combination: res.combination.map(|c| {
                sel.into_iter()
                    .zip(c)
                    .filter(|(_, a)| !a.is_zero())
                    .collect()
            }),
        })
    }

    /// Evaluates on every assignment of `z`, in binary counting order with
    /// the first variable as the low bit.
    pub fn truth_table(&self) -> Result<Vec<bool>> {
        if self.z.len() > 20 {
            return Err(Error::EnumerationBudget {
                needed: self.z.len(),
                budget: 20,
            });
        }
        (0..1u64 << self.z.len())
            .map(|m| self.span_eval(&assignment(&self.z, m)))
            .collect()
    }

    /// Removes constant labels. Nonmonotone programs replace `(1, v)` by
    /// `(z, v), (~z, v)` for the name-wise first z; monotone programs replace
    /// it by `(z_i, v)` for every z_i.
    pub fn desugar_constant_labels(&self) -> Result<Desugared> {
        if self.z.is_empty() {
            return Err(Error::Invalid("span program has no z-variables".into()));
        }
        let monotone = self.is_monotone();
        let constant_one =
            monotone && self.span_eval(&self.z.iter().map(|v| (*v, false)).collect())?;
        let pivot = *self
            .z
            .iter()
            .min_by_key(|v| self.ring.name(**v))
            .expect("nonempty");
        let mut out = SpanProgram::new(&self.ring, self.z.clone(), self.target.clone());
        for e in &self.entries {
            match e.label {
                Label::One if monotone => {
                    for z in &self.z {
                        out.push(Label::Pos(*z), e.vector.clone())?;
                    }
                }
                Label::One => {
                    out.push(Label::Pos(pivot), e.vector.clone())?;
                    out.push(Label::Neg(pivot), e.vector.clone())?;
                }
                _ => out.push(e.label, e.vector.clone())?,
            }
        }
        Ok(Desugared {
            program: out,
            constant_one,
        })
    }

    pub fn to_file(&self) -> SpanProgramFile {
        SpanProgramFile {
            field: self.field().tag(),
            z: self.ring.names(&self.z),
            entries: self
                .entries
                .iter()
                .map(|e| (e.label.display(&self.ring), e.vector.to_string()))
                .collect(),
            target: self.target.to_string(),
        }
    }

    pub fn from_file(ring: &PolyRing, f: &SpanProgramFile) -> Result<SpanProgram> {
        let field = Field::parse_tag(&f.field)?;
        if field != ring.field() {
            return Err(Error::FieldMismatch(
                field.to_string(),
                ring.field().to_string(),
            ));
        }
        let z = f.z.iter().map(|n| ring.var(n)).collect();
        let mut s = SpanProgram::new(ring, z, parse_poly(ring, &f.target)?);
        for (l, v) in &f.entries {
            s.push(Label::parse(ring, l)?, parse_poly(ring, v)?)?;
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(ring: &PolyRing, text: &str) -> Result<SpanProgram> {
        SpanProgram::from_file(ring, &serde_json::from_str(text)?)
    }
}

impl fmt::Display for SpanProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "({}, {})", e.label.display(&self.ring), e.vector)?;
        }
        write!(f, "target {}", self.target)
    }
}

/// Assignment of `zs` read off the bits of `mask`, first variable lowest.
pub fn assignment(zs: &[Var], mask: u64) -> HashMap<Var, bool> {
    zs.iter()
        .enumerate()
        .map(|(i, v)| (*v, mask >> i & 1 == 1))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanProgramFile {
    pub field: String,
    pub z: Vec<String>,
    pub entries: Vec<(String, String)>,
    pub target: String,
}

#[cfg(test)]
mod tests;
