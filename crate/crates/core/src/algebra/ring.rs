//! The session object: a field together with an append-only variable table.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::field::{Field, FieldElement};

/// Index into a [`PolyRing`]'s variable table. Ids follow registration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

#[derive(Default)]
struct VarTable {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

struct RingInner {
    field: Field,
    vars: RwLock<VarTable>,
}

/// Polynomial ring `F[vars]`. Cloning is cheap; clones share the table.
///
/// Two rings are equal only if they are the same session, so polynomials
/// built against different tables never silently mix.
#[derive(Clone)]
pub struct PolyRing(Arc<RingInner>);

impl PolyRing {
    pub fn new(field: Field) -> PolyRing {
        PolyRing(Arc::new(RingInner {
            field,
            vars: RwLock::new(VarTable::default()),
        }))
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn zero(&self) -> FieldElement {
        self.0.field.zero()
    }

    pub fn one(&self) -> FieldElement {
        self.0.field.one()
    }

    /// Returns the variable called `name`, registering it if needed.
    pub fn var(&self, name: &str) -> Var {
        if let Some(v) = self.lookup(name) {
            return v;
        }
        let mut t = self.0.vars.write().expect("variable table poisoned");
        if let Some(v) = t.index.get(name) {
            return *v;
        }
        let v = Var(t.names.len() as u32);
        t.names.push(name.to_string());
        t.index.insert(name.to_string(), v);
        v
    }

    pub fn vars<S: AsRef<str>>(&self, names: &[S]) -> Vec<Var> {
        names.iter().map(|n| self.var(n.as_ref())).collect()
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.0
            .vars
            .read()
            .expect("variable table poisoned")
            .index
            .get(name)
            .copied()
    }

    /// Registers a variable with a name not yet in use, `prefix<k>` for the
    /// smallest free `k >= 1`.
    pub fn fresh(&self, prefix: &str) -> Var {
        let mut t = self.0.vars.write().expect("variable table poisoned");
        let mut k = 1usize;
        loop {
            let name = format!("{prefix}{k}");
            if !t.index.contains_key(&name) {
                let v = Var(t.names.len() as u32);
                t.names.push(name.clone());
                t.index.insert(name, v);
                return v;
            }
            k += 1;
        }
    }

    pub fn name(&self, v: Var) -> String {
        self.0
            .vars
            .read()
            .expect("variable table poisoned")
            .names
            .get(v.0 as usize)
            .cloned()
            .unwrap_or_else(|| format!("?{}", v.0))
    }

    pub fn names(&self, vs: &[Var]) -> Vec<String> {
        vs.iter().map(|v| self.name(*v)).collect()
    }

    pub fn num_vars(&self) -> usize {
        self.0
            .vars
            .read()
            .expect("variable table poisoned")
            .names
            .len()
    }
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyRing({}, {} vars)", self.field(), self.num_vars())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registration_is_idempotent_and_ordered() {
        let r = PolyRing::new(Field::default());
        let x = r.var("x1");
        let z = r.var("z1");
        assert_eq!(r.var("x1"), x);
        assert!(x < z);
        assert_eq!(r.name(z), "z1");
        let w = r.fresh("x");
        assert_eq!(r.name(w), "x2");
    }

    #[test]
    fn distinct_sessions_are_unequal() {
        let a = PolyRing::new(Field::default());
        let b = PolyRing::new(Field::default());
        assert_ne!(a, b);
        assert_eq!(a, a.clone());
    }
}
