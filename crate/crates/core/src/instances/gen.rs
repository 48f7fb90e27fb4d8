//! The generation function: point `n` is generated from point 1 by triples
//! `(a, b, c)` meaning "a and b generated imply c generated".

use std::collections::{BTreeSet, HashMap};

use super::circuit::{BooleanCircuit, Node};
use crate::algebra::{PolyRing, Var};
use crate::error::{Error, Result};
use crate::formulas::{split_from_cnfs, Cnf, PolySystem};

/// Points are `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenInstance {
    pub n: usize,
    pub triples: BTreeSet<(usize, usize, usize)>,
}

impl GenInstance {
    pub fn new(
        n: usize,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<GenInstance> {
        let triples: BTreeSet<_> = triples.into_iter().collect();
        if let Some(t) = triples
            .iter()
            .find(|(a, b, c)| [*a, *b, *c].iter().any(|p| *p == 0 || *p > n))
        {
            return Err(Error::Invalid(format!("triple {t:?} out of range 1..={n}")));
        }
        Ok(GenInstance { n, triples })
    }

    /// Position of `(a, b, c)` in the characteristic vector.
    pub fn index(n: usize, t: (usize, usize, usize)) -> usize {
        ((t.0 - 1) * n + (t.1 - 1)) * n + (t.2 - 1)
    }

    pub fn triple_at(n: usize, i: usize) -> (usize, usize, usize) {
        (i / (n * n) + 1, i / n % n + 1, i % n + 1)
    }

    pub fn characteristic_vector(&self) -> Vec<bool> {
        let mut v = vec![false; self.n.pow(3)];
        for t in &self.triples {
            v[GenInstance::index(self.n, *t)] = true;
        }
        v
    }

    pub fn from_vector(n: usize, v: &[bool]) -> GenInstance {
        GenInstance {
            n,
            triples: (0..v.len())
                .filter(|i| v[*i])
                .map(|i| GenInstance::triple_at(n, i))
                .collect(),
        }
    }
}

/// Closure of `{1}` under the triples; true iff it contains `n`.
pub fn gen_eval(g: &GenInstance) -> bool {
    let mut have = vec![false; g.n + 1];
    if g.n >= 1 {
        have[1] = true;
    }
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b, c) in &g.triples {
            if have[a] && have[b] && !have[c] {
                have[c] = true;
                changed = true;
            }
        }
    }
    g.n >= 1 && have[g.n]
}

/// Monotone circuit for the function on `n^3` triple indicators: `n - 1`
/// rounds of closure updates started from the state `{1}`. Returns the
/// circuit and the indicator variables in characteristic-vector order.
pub fn gen_circuit(ring: &PolyRing, n: usize) -> (BooleanCircuit, Vec<Var>) {
    let z: Vec<Var> = (0..n.pow(3))
        .map(|i| {
            let (a, b, c) = GenInstance::triple_at(n, i);
            ring.var(&format!("z_{a}_{b}_{c}"))
        })
        .collect();
    let mut circ = BooleanCircuit::new();
    let inputs: Vec<Node> = z.iter().map(|v| circ.input(*v)).collect();
    let mut state: Vec<Node> = (1..=n).map(|p| Node::Const(p == 1)).collect();
    for _ in 1..n {
        let mut both = vec![Node::Const(false); n * n];
        for a in 0..n {
            for b in 0..n {
                both[a * n + b] = circ.and(state[a], state[b]);
            }
        }
        let mut next = Vec::with_capacity(n);
        for c in 1..=n {
            let mut terms = vec![state[c - 1]];
            for a in 1..=n {
                for b in 1..=n {
                    let ab = both[(a - 1) * n + (b - 1)];
                    terms.push(circ.and(ab, inputs[GenInstance::index(n, (a, b, c))]));
                }
            }
            next.push(circ.or_all(&terms));
        }
        state = next;
    }
    circ.output = Some(state[n - 1]);
    (circ, z)
}

/// `phi0(x, z)` is satisfiable iff the function is 0 and `phi1(y, z)` iff it
/// is 1; z occurs only negatively in `phi0` and only positively in `phi1`.
#[derive(Clone, Debug)]
pub struct GenSplit {
    pub n: usize,
    pub phi0: Cnf,
    pub phi1: Cnf,
    pub x: Vec<Var>,
    pub y: Vec<Var>,
    pub z: Vec<Var>,
}

impl GenSplit {
    pub fn system(&self) -> Result<PolySystem> {
        split_from_cnfs(&self.phi0, &self.phi1, &self.x, &self.y, &self.z)
    }

    pub fn assignment(&self, g: &GenInstance) -> HashMap<Var, bool> {
        self.z
            .iter()
            .copied()
            .zip(g.characteristic_vector())
            .collect()
    }

    /// Conjunction of both sides over `x, y, z`.
    pub fn combined(&self) -> Cnf {
        let mut f = Cnf::with_vars(self.phi0.ring(), [&self.x[..], &self.y, &self.z].concat());
        f.extend(&self.phi0);
        f.extend(&self.phi1);
        f
    }
}

pub fn gen_split_formula(ring: &PolyRing, n: usize) -> Result<GenSplit> {
    if n < 2 {
        return Err(Error::Invalid("the split formula needs n >= 2".into()));
    }
    let (circ, z) = gen_circuit(ring, n);
    let (mut phi0, x) = circ.encode_output(ring, "x", false)?;
    let (mut phi1, y) = circ.encode_output(ring, "y", true)?;
    for v in &z {
        phi0.declare(*v);
        phi1.declare(*v);
    }
    Ok(GenSplit {
        n,
        phi0,
        phi1,
        x,
        y,
        z,
    })
}
