//! Clauses, CNFs and DIMACS text.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use crate::algebra::{PolyRing, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: Var) -> Literal {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: Var) -> Literal {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Literal {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn eval(&self, value: bool) -> bool {
        value == self.positive
    }
}

/// Outcome of clause preprocessing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Clause { clause: Clause, collapsed: bool },
    Tautology,
}

/// A nonempty disjunction with no repeated variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// Collapses duplicate literals and detects `v or not v`, keeping the
    /// order of first occurrence.
    pub fn normalize(lits: &[Literal]) -> Result<Normalized> {
        if lits.is_empty() {
            return Err(Error::Invalid("empty clause".into()));
        }
        let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
        let mut collapsed = false;
        for l in lits {
            match out.iter().find(|m| m.var == l.var) {
                Some(m) if m.positive == l.positive => collapsed = true,
                Some(_) => return Ok(Normalized::Tautology),
                None => out.push(*l),
            }
        }
        Ok(Normalized::Clause {
            clause: Clause { lits: out },
            collapsed,
        })
    }

    /// Builds a clause that must already be clean.
    pub fn new(lits: Vec<Literal>) -> Result<Clause> {
        match Clause::normalize(&lits)? {
            Normalized::Clause {
                clause,
                collapsed: false,
            } => Ok(clause),
            Normalized::Clause { .. } => Err(Error::Invalid("clause repeats a literal".into())),
            Normalized::Tautology => Err(Error::Invalid("tautological clause".into())),
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var)
    }

    /// Literal multiset as a sorted list, for order-insensitive comparison.
    pub fn sorted(&self) -> Vec<Literal> {
        let mut v = self.lits.clone();
        v.sort();
        v
    }

    pub fn eval<F: Fn(Var) -> bool>(&self, value: F) -> bool {
        self.lits.iter().any(|l| l.eval(value(l.var)))
    }

    pub fn rename(&self, map: &HashMap<Var, Var>) -> Clause {
        Clause {
            lits: self
                .lits
                .iter()
                .map(|l| Literal {
                    var: *map.get(&l.var).unwrap_or(&l.var),
                    positive: l.positive,
                })
                .collect(),
        }
    }

    pub fn display(&self, ring: &PolyRing) -> String {
        let parts: Vec<String> = self
            .lits
            .iter()
            .map(|l| format!("{}{}", if l.positive { "" } else { "~" }, ring.name(l.var)))
            .collect();
        format!("({})", parts.join(" | "))
    }
}

/// A conjunction of clauses over declared variables; DIMACS index `k`
/// refers to `vars[k - 1]`.
#[derive(Clone, Debug)]
pub struct Cnf {
    ring: PolyRing,
    vars: Vec<Var>,
    clauses: Vec<Clause>,
}

impl PartialEq for Cnf {
    fn eq(&self, other: &Cnf) -> bool {
        self.ring == other.ring && self.vars == other.vars && self.clauses == other.clauses
    }
}

impl Cnf {
    pub fn new(ring: &PolyRing) -> Cnf {
        Cnf {
            ring: ring.clone(),
            vars: Vec::new(),
            clauses: Vec::new(),
        }
    }

    pub fn with_vars(ring: &PolyRing, vars: Vec<Var>) -> Cnf {
        Cnf {
            ring: ring.clone(),
            vars,
            clauses: Vec::new(),
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn declare(&mut self, v: Var) {
        if !self.vars.contains(&v) {
            self.vars.push(v);
        }
    }

    /// Appends a clause, declaring its variables on first use.
    pub fn push(&mut self, c: Clause) {
        for v in c.vars() {
            self.declare(v);
        }
        self.clauses.push(c);
    }

    /// Appends raw literals after preprocessing; returns a warning when the
    /// clause was altered or dropped.
    pub fn push_literals(&mut self, lits: &[Literal]) -> Result<Option<String>> {
        match Clause::normalize(lits)? {
            Normalized::Clause { clause, collapsed } => {
                let warn = collapsed.then(|| {
                    format!(
                        "duplicate literal collapsed in {}",
                        clause.display(&self.ring)
                    )
                });
                self.push(clause);
                Ok(warn)
            }
            Normalized::Tautology => Ok(Some("tautological clause dropped".to_string())),
        }
    }

    pub fn extend(&mut self, other: &Cnf) {
        for v in &other.vars {
            self.declare(*v);
        }
        for c in &other.clauses {
            self.clauses.push(c.clone());
        }
    }

    pub fn eval<F: Fn(Var) -> bool>(&self, value: F) -> bool {
        self.clauses.iter().all(|c| c.eval(&value))
    }

    pub fn mentioned(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }

    /// Sorted clause multiset, for order-insensitive comparison.
    pub fn clause_multiset(&self) -> Vec<Vec<Literal>> {
        let mut v: Vec<Vec<Literal>> = self.clauses.iter().map(|c| c.sorted()).collect();
        v.sort();
        v
    }

    /// Exhaustive satisfiability over the declared variables.
    pub fn brute_force(&self) -> Option<HashMap<Var, bool>> {
        super::sat::dpll(self, &HashMap::new())
    }
}

/// Result of DIMACS parsing with preprocessing warnings.
#[derive(Clone, Debug)]
pub struct ParsedDimacs {
    pub cnf: Cnf,
    pub warnings: Vec<String>,
}

/// Parses DIMACS `cnf`. Variable `k` is named `{prefix}{k}` unless a
/// `c var <k> <name>` comment names it.
pub fn parse_dimacs(ring: &PolyRing, text: &str, prefix: &str) -> Result<ParsedDimacs> {
    let err = |line: usize, msg: &str| Error::Dimacs {
        line,
        msg: msg.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut names: HashMap<usize, String> = HashMap::new();
    let mut raw: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut cur: Vec<i64> = Vec::new();
    let mut cur_line = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let t = line.trim();
        if t.is_empty() || t == "%" {
            continue;
        }
        if let Some(rest) = t.strip_prefix('c') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() == 3 && toks[0] == "var" {
                let k: usize = toks[1]
                    .parse()
                    .map_err(|_| err(ln, "bad variable name comment"))?;
                names.insert(k, toks[2].to_string());
            }
            continue;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(err(ln, "duplicate header"));
            }
            let toks: Vec<&str> = t.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(err(
                    ln,
                    "malformed header, expected `p cnf <vars> <clauses>`",
                ));
            }
            let nv = toks[2]
                .parse()
                .map_err(|_| err(ln, "malformed variable count"))?;
            let nc = toks[3]
                .parse()
                .map_err(|_| err(ln, "malformed clause count"))?;
            header = Some((nv, nc));
            continue;
        }
        let Some((nv, _)) = header else {
            return Err(err(ln, "clause before header"));
        };
        for tok in t.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| err(ln, &format!("bad literal `{tok}`")))?;
            if cur.is_empty() {
                cur_line = ln;
            }
            if lit == 0 {
                if cur.is_empty() {
                    return Err(err(
                        ln,
                        "literal 0 with no preceding literals (empty clause)",
                    ));
                }
                raw.push((cur_line, std::mem::take(&mut cur)));
            } else {
                if lit.unsigned_abs() as usize > nv {
                    return Err(err(ln, &format!("literal {lit} out of range 1..={nv}")));
                }
                cur.push(lit);
            }
        }
    }
    let Some((nv, nc)) = header else {
        return Err(err(0, "missing header"));
    };
    if !cur.is_empty() {
        return Err(err(cur_line, "clause not terminated by 0"));
    }
    if raw.len() != nc {
        return Err(err(
            0,
            &format!("header declares {nc} clauses, found {}", raw.len()),
        ));
    }
    let vars: Vec<Var> = (1..=nv)
        .map(|k| {
            ring.var(
                names
                    .get(&k)
                    .map(String::as_str)
                    .unwrap_or(&format!("{prefix}{k}")),
            )
        })
        .collect();
    let mut cnf = Cnf::with_vars(ring, vars.clone());
    let mut warnings = Vec::new();
    for (ln, lits) in raw {
        let lits: Vec<Literal> = lits
            .iter()
            .map(|&l| Literal {
                var: vars[l.unsigned_abs() as usize - 1],
                positive: l > 0,
            })
            .collect();
        if let Some(w) = cnf
            .push_literals(&lits)
            .map_err(|e| err(ln, &e.to_string()))?
        {
            warnings.push(format!("line {ln}: {w}"));
        }
    }
    Ok(ParsedDimacs { cnf, warnings })
}

/// Emits DIMACS; variables whose name differs from `{prefix}{k}` get a
/// `c var` comment so parsing restores them.
pub fn emit_dimacs(cnf: &Cnf, prefix: &str) -> String {
    let mut out = String::new();
    let index: HashMap<Var, usize> = cnf
        .vars
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, i + 1))
        .collect();
    for (i, v) in cnf.vars.iter().enumerate() {
        let name = cnf.ring.name(*v);
        if name != format!("{prefix}{}", i + 1) {
            writeln!(out, "c var {} {name}", i + 1).unwrap();
        }
    }
    writeln!(out, "p cnf {} {}", cnf.vars.len(), cnf.clauses.len()).unwrap();
    for c in &cnf.clauses {
        for l in c.literals() {
            let k = index[&l.var] as i64;
            write!(out, "{} ", if l.positive { k } else { -k }).unwrap();
        }
        out.push_str("0\n");
    }
    out
}
