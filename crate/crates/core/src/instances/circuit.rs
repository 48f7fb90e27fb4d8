//! Fan-in-2 Boolean circuits with constant folding, and their one-sided
//! clause encodings.

use crate::algebra::{PolyRing, Var};
use crate::error::{Error, Result};
use crate::formulas::{Clause, Cnf, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Const(bool),
    Gate(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(Var),
    And(Node, Node),
    Or(Node, Node),
    Not(Node),
}

/// Gates are stored in topological order, so children always precede
/// parents. Each input variable has exactly one input gate.
#[derive(Clone, Debug, Default)]
pub struct BooleanCircuit {
    pub gates: Vec<Gate>,
    pub output: Option<Node>,
}

impl BooleanCircuit {
    pub fn new() -> BooleanCircuit {
        BooleanCircuit::default()
    }

    pub fn input(&mut self, v: Var) -> Node {
        if let Some(i) = self.gates.iter().position(|g| *g == Gate::Input(v)) {
            return Node::Gate(i);
        }
        self.gates.push(Gate::Input(v));
        Node::Gate(self.gates.len() - 1)
    }

    pub fn and(&mut self, a: Node, b: Node) -> Node {
        match (a, b) {
            (Node::Const(false), _) | (_, Node::Const(false)) => Node::Const(false),
            (Node::Const(true), x) | (x, Node::Const(true)) => x,
            _ if a == b => a,
            _ => {
                self.gates.push(Gate::And(a, b));
                Node::Gate(self.gates.len() - 1)
            }
        }
    }

    pub fn or(&mut self, a: Node, b: Node) -> Node {
        match (a, b) {
            (Node::Const(true), _) | (_, Node::Const(true)) => Node::Const(true),
            (Node::Const(false), x) | (x, Node::Const(false)) => x,
            _ if a == b => a,
            _ => {
                self.gates.push(Gate::Or(a, b));
                Node::Gate(self.gates.len() - 1)
            }
        }
    }

    pub fn not(&mut self, a: Node) -> Node {
        match a {
            Node::Const(b) => Node::Const(!b),
            _ => {
                self.gates.push(Gate::Not(a));
                Node::Gate(self.gates.len() - 1)
            }
        }
    }

    /// Balanced disjunction of `xs` (false when empty).
    pub fn or_all(&mut self, xs: &[Node]) -> Node {
        match xs.len() {
            0 => Node::Const(false),
            1 => xs[0],
            n => {
                let (l, r) = xs.split_at(n / 2);
                let a = self.or_all(l);
                let b = self.or_all(r);
                self.or(a, b)
            }
        }
    }

    pub fn eval<F: Fn(Var) -> bool>(&self, input: F) -> bool {
        let mut vals = Vec::with_capacity(self.gates.len());
        let get = |vals: &Vec<bool>, n: Node| match n {
            Node::Const(b) => b,
            Node::Gate(i) => vals[i],
        };
        for g in &self.gates {
            let v = match *g {
                Gate::Input(x) => input(x),
                Gate::And(a, b) => get(&vals, a) && get(&vals, b),
                Gate::Or(a, b) => get(&vals, a) || get(&vals, b),
                Gate::Not(a) => !get(&vals, a),
            };
            vals.push(v);
        }
        get(&vals, self.output.expect("output set"))
    }

    pub fn is_monotone(&self) -> bool {
        !self.gates.iter().any(|g| matches!(g, Gate::Not(_)))
    }

    /// Clauses stating that the output can be `target` given the inputs.
    ///
    /// A fresh variable per non-input gate records "this gate evaluates to
    /// `target`", and each gate only contributes the implication from its
    /// variable to its children. For a monotone circuit the formula is
    /// satisfiable at an input exactly when the circuit outputs `target`;
    /// inputs occur positively when `target` is true and negatively
    /// otherwise. Every clause has at most 3 literals.
    pub fn encode_output(
        &self,
        ring: &PolyRing,
        prefix: &str,
        target: bool,
    ) -> Result<(Cnf, Vec<Var>)> {
        if !self.is_monotone() {
            return Err(Error::Invalid(
                "one-sided encoding needs a monotone circuit".into(),
            ));
        }
        let out = self
            .output
            .ok_or_else(|| Error::Invalid("circuit has no output".into()))?;
        let mut f = Cnf::new(ring);
        let mut gate_vars: Vec<Option<Var>> = vec![None; self.gates.len()];
        let mut fresh = Vec::new();
        for (i, g) in self.gates.iter().enumerate() {
            if !matches!(g, Gate::Input(_)) {
                let v = ring.var(&format!("{prefix}{}", fresh.len() + 1));
                fresh.push(v);
                gate_vars[i] = Some(v);
            }
        }
        // The literal "node evaluates to target", or a constant.
        let lit = |n: Node| -> std::result::Result<Literal, bool> {
            match n {
                Node::Const(b) => Err(b == target),
                Node::Gate(i) => Ok(match self.gates[i] {
                    Gate::Input(x) => Literal {
                        var: x,
                        positive: target,
                    },
                    _ => Literal::pos(gate_vars[i].expect("gate variable")),
                }),
            }
        };
        for v in &fresh {
            f.declare(*v);
        }
        let push = |f: &mut Cnf, head: Var, body: &[Node]| -> Result<()> {
            let mut lits = vec![Literal::neg(head)];
            for n in body {
                match lit(*n) {
                    Ok(l) => lits.push(l),
                    Err(true) => return Ok(()),
                    Err(false) => {}
                }
            }
            f.push(Clause::new(lits)?);
            Ok(())
        };
        for (i, g) in self.gates.iter().enumerate() {
            let Some(h) = gate_vars[i] else { continue };
            // "And" to true and "Or" to false need both children; the other
            // two cases need one of them.
            match (*g, target) {
                (Gate::And(a, b), true) | (Gate::Or(a, b), false) => {
                    push(&mut f, h, &[a])?;
                    push(&mut f, h, &[b])?;
                }
                (Gate::And(a, b), false) | (Gate::Or(a, b), true) => push(&mut f, h, &[a, b])?,
                _ => unreachable!("inputs have no gate variable; circuit is monotone"),
            }
        }
        match lit(out) {
            Ok(l) => f.push(Clause::new(vec![l])?),
            Err(true) => {}
            Err(false) => {
                return Err(Error::Invalid(
                    "output is constantly the wrong value".into(),
                ))
            }
        }
        Ok((f, fresh))
    }
}
