//! Tagged polynomial systems and the standard CNF translation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::cnf::{Clause, Cnf};
use crate::algebra::{parse_poly, Field, PolyRing, SparsePoly, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Axiom,
    Boolean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    P0,
    P1,
    #[serde(rename = "untagged")]
    Untagged,
}

/// Variable roles. `X`, `Y`, `Z` are Boolean; `AuxW` (normal-form
/// variables) and `AuxField` range over the field and have no Boolean axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "aux-w")]
    AuxW,
    #[serde(rename = "aux-field")]
    AuxField,
}

impl Role {
    pub fn is_boolean(self) -> bool {
        matches!(self, Role::X | Role::Y | Role::Z)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub poly: SparsePoly,
    pub kind: Kind,
    pub part: Part,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    ring: PolyRing,
    entries: Vec<Entry>,
    roles: BTreeMap<Var, Role>,
}

impl PolySystem {
    pub fn new(ring: &PolyRing) -> PolySystem {
        PolySystem {
            ring: ring.clone(),
            entries: Vec::new(),
            roles: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn polys(&self) -> impl Iterator<Item = &SparsePoly> {
        self.entries.iter().map(|e| &e.poly)
    }

    pub fn roles(&self) -> &BTreeMap<Var, Role> {
        &self.roles
    }

    pub fn role(&self, v: Var) -> Option<Role> {
        self.roles.get(&v).copied()
    }

    /// Declares a role; a variable keeps a single role.
    pub fn set_role(&mut self, v: Var, role: Role) -> Result<()> {
        match self.roles.insert(v, role) {
            Some(old) if old != role => Err(Error::Invalid(format!(
                "variable {} has roles {old:?} and {role:?}",
                self.ring.name(v)
            ))),
            _ => Ok(()),
        }
    }

    pub fn vars_with_role(&self, role: Role) -> Vec<Var> {
        self.roles
            .iter()
            .filter(|(_, r)| **r == role)
            .map(|(v, _)| *v)
            .collect()
    }

    pub fn boolean_vars(&self) -> Vec<Var> {
        self.roles
            .iter()
            .filter(|(_, r)| r.is_boolean())
            .map(|(v, _)| *v)
            .collect()
    }

    /// Adds a polynomial; every variable it mentions must have a role.
    pub fn push(&mut self, poly: SparsePoly, kind: Kind, part: Part) -> Result<usize> {
        if poly.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        for v in poly.variables() {
            if !self.roles.contains_key(&v) {
                return Err(Error::Invalid(format!(
                    "variable {} has no role",
                    self.ring.name(v)
                )));
            }
        }
        self.entries.push(Entry { poly, kind, part });
        Ok(self.entries.len() - 1)
    }

    pub fn push_axiom(&mut self, poly: SparsePoly, part: Part) -> Result<usize> {
        self.push(poly, Kind::Axiom, part)
    }

    pub fn push_boolean(&mut self, v: Var, part: Part) -> Result<usize> {
        let p = SparsePoly::boolean_axiom(&self.ring, v);
        self.push(p, Kind::Boolean, part)
    }

    /// Checks that every Boolean-role variable has exactly one Boolean axiom
    /// and that no other variable has one.
    pub fn validate(&self) -> Result<()> {
        let mut seen: BTreeMap<Var, usize> = BTreeMap::new();
        for e in &self.entries {
            if e.kind == Kind::Boolean {
                let vars = e.poly.variables();
                let v = *vars
                    .iter()
                    .next()
                    .ok_or_else(|| Error::Invalid("constant Boolean axiom".into()))?;
                if vars.len() != 1 || e.poly != SparsePoly::boolean_axiom(&self.ring, v) {
                    return Err(Error::Invalid(format!(
                        "`{}` is not a Boolean axiom",
                        e.poly
                    )));
                }
                *seen.entry(v).or_default() += 1;
            }
        }
        for (v, r) in &self.roles {
            let n = seen.get(v).copied().unwrap_or(0);
            if r.is_boolean() && n != 1 {
                return Err(Error::Invalid(format!(
                    "{} Boolean axioms for {}",
                    n,
                    self.ring.name(*v)
                )));
            }
            if !r.is_boolean() && n != 0 {
                return Err(Error::Invalid(format!(
                    "field variable {} has a Boolean axiom",
                    self.ring.name(*v)
                )));
            }
        }
        Ok(())
    }

    /// Entries with the given partition tag, as (index, entry).
    pub fn part(&self, part: Part) -> impl Iterator<Item = (usize, &Entry)> {
        self.entries
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.part == part)
    }

    /// Subsystem of the given parts, keeping roles of the variables it mentions.
    pub fn restrict_to(&self, parts: &[Part]) -> PolySystem {
        let mut s = PolySystem::new(&self.ring);
        for e in &self.entries {
            if parts.contains(&e.part) {
                for v in e.poly.variables() {
                    s.roles.insert(v, self.roles[&v]);
                }
                s.entries.push(e.clone());
            }
        }
        s
    }

    pub fn mentioned(&self) -> BTreeSet<Var> {
        self.entries
            .iter()
            .flat_map(|e| e.poly.variables())
            .collect()
    }

    pub fn to_file(&self) -> SystemFile {
        SystemFile {
            field: self.field().tag(),
            roles: self
                .roles
                .iter()
                .map(|(v, r)| (self.ring.name(*v), *r))
                .collect(),
            polynomials: self
                .entries
                .iter()
                .map(|e| SystemEntryFile {
                    poly: e.poly.to_string(),
                    kind: e.kind,
                    part: e.part,
                })
                .collect(),
        }
    }

    pub fn from_file(ring: &PolyRing, f: &SystemFile) -> Result<PolySystem> {
        let field = Field::parse_tag(&f.field)?;
        if field != ring.field() {
            return Err(Error::FieldMismatch(f.field.clone(), ring.field().tag()));
        }
        let mut s = PolySystem::new(ring);
        for (name, role) in &f.roles {
            s.set_role(ring.var(name), *role)?;
        }
        for e in &f.polynomials {
            s.push(parse_poly(ring, &e.poly)?, e.kind, e.part)?;
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(ring: &PolyRing, text: &str) -> Result<PolySystem> {
        PolySystem::from_file(ring, &serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemEntryFile {
    pub poly: String,
    pub kind: Kind,
    pub part: Part,
}

/// JSON form of a system. Roles are `[name, role]` pairs listed in
/// variable-table order, so loading into a fresh ring reproduces the
/// printed form of every polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub field: String,
    pub roles: Vec<(String, Role)>,
    pub polynomials: Vec<SystemEntryFile>,
}

/// `tr(C) = prod_{positive} (1 - x) * prod_{negative} x`
pub fn translate_clause(ring: &PolyRing, c: &Clause) -> SparsePoly {
    let mut p = SparsePoly::one(ring);
    for l in c.literals() {
        let f = if l.positive {
            SparsePoly::one_minus(ring, l.var)
        } else {
            SparsePoly::var(ring, l.var)
        };
        p = &p * &f;
    }
    p
}

/// Clause translations followed by a Boolean axiom for every declared
/// variable; all variables get role `x`, all entries are untagged.
pub fn translate_cnf(f: &Cnf) -> PolySystem {
    translate_with_roles(f, |_| Role::X, Part::Untagged)
}

/// Translation with caller-chosen roles and a single partition tag.
pub fn translate_with_roles<R: Fn(Var) -> Role>(f: &Cnf, role: R, part: Part) -> PolySystem {
    let ring = f.ring();
    let mut s = PolySystem::new(ring);
    for v in f.vars() {
        s.set_role(*v, role(*v)).expect("fresh system");
    }
    for c in f.clauses() {
        s.push_axiom(translate_clause(ring, c), part)
            .expect("declared variables");
    }
    for v in f.vars() {
        if role(*v).is_boolean() {
            s.push_boolean(*v, part).expect("declared variables");
        }
    }
    s
}

/// Split system `P0(x, z) + P1(y, z)`: the x Boolean axioms join P0, the y
/// and z Boolean axioms join P1.
pub fn split_system(
    ring: &PolyRing,
    p0: &[SparsePoly],
    p1: &[SparsePoly],
    x: &[Var],
    y: &[Var],
    z: &[Var],
) -> Result<PolySystem> {
    let mut s = PolySystem::new(ring);
    for (vs, r) in [(x, Role::X), (y, Role::Y), (z, Role::Z)] {
        for v in vs {
            s.set_role(*v, r)?;
        }
    }
    for p in p0 {
        if p.variables().iter().any(|v| y.contains(v)) {
            return Err(Error::Shape(format!(
                "P0 polynomial `{p}` mentions a y variable"
            )));
        }
        s.push_axiom(p.clone(), Part::P0)?;
    }
    for v in x {
        s.push_boolean(*v, Part::P0)?;
    }
    for p in p1 {
        if p.variables().iter().any(|v| x.contains(v)) {
            return Err(Error::Shape(format!(
                "P1 polynomial `{p}` mentions an x variable"
            )));
        }
        s.push_axiom(p.clone(), Part::P1)?;
    }
    for v in y.iter().chain(z) {
        s.push_boolean(*v, Part::P1)?;
    }
    Ok(s)
}

/// The split system of two CNFs `phi0(x, z)` and `phi1(y, z)`.
pub fn split_from_cnfs(
    phi0: &Cnf,
    phi1: &Cnf,
    x: &[Var],
    y: &[Var],
    z: &[Var],
) -> Result<PolySystem> {
    let ring = phi0.ring();
    let p0: Vec<SparsePoly> = phi0
        .clauses()
        .iter()
        .map(|c| translate_clause(ring, c))
        .collect();
    let p1: Vec<SparsePoly> = phi1
        .clauses()
        .iter()
        .map(|c| translate_clause(ring, c))
        .collect();
    split_system(ring, &p0, &p1, x, y, z)
}
