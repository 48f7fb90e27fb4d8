//! Linear IPS certificates with roABP coefficients.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_poly, Field, FieldElement, PolyRing, SparsePoly, Var};
use crate::error::{Error, Result};
use crate::formulas::{as_clause, PolySystem, SystemEntryFile, SystemFile};
use crate::roabp::{
    random_element, sample_set_size, Roabp, RoabpFile, UniPoly, DEFAULT_EXPANSION_BUDGET,
};

/// `sum_i coefficients[i] * system[i] = target`, every coefficient an roABP
/// in the shared `order`.
#[derive(Clone, Debug)]
pub struct LinearIpsCertificate {
    pub system: PolySystem,
    pub order: Vec<Var>,
    pub coefficients: Vec<Roabp>,
    pub target: SparsePoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Expand {
        budget: usize,
    },
    Randomized {
        trials: usize,
        seed: u64,
    },
    /// Deterministic coefficient-span zero test on the combined program.
    Exact,
}

impl Default for VerifyMode {
    fn default() -> VerifyMode {
        VerifyMode::Expand {
            budget: DEFAULT_EXPANSION_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub valid: bool,
    /// Maximum coefficient width, recomputed from the programs.
    pub width: usize,
    pub mode: VerifyMode,
    /// Upper bound on the probability of accepting a false identity;
    /// `Some(0.0)` for exact modes.
    pub error_bound: Option<f64>,
    pub detail: String,
}

impl VerifyReport {
    pub fn summary(&self) -> String {
        let v = if self.valid { "valid" } else { "invalid" };
        format!("{v}, width {}", self.width)
    }
}

impl LinearIpsCertificate {
    pub fn new(
        system: PolySystem,
        order: Vec<Var>,
        coefficients: Vec<Roabp>,
        target: SparsePoly,
    ) -> Result<Self> {
        let c = LinearIpsCertificate {
            system,
            order,
            coefficients,
            target,
        };
        c.check_shape()?;
        Ok(c)
    }

    /// A refutation: target 1.
    pub fn refutation(
        system: PolySystem,
        order: Vec<Var>,
        coefficients: Vec<Roabp>,
    ) -> Result<Self> {
        let one = SparsePoly::one(system.ring());
        LinearIpsCertificate::new(system, order, coefficients, one)
    }

    fn check_shape(&self) -> Result<()> {
        if self.coefficients.len() != self.system.len() {
            return Err(Error::Invalid(format!(
                "{} coefficients for {} axioms",
                self.coefficients.len(),
                self.system.len()
            )));
        }
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.order() != self.order.as_slice() {
                return Err(Error::OrderMismatch(format!(
                    "coefficient {i} is in a different order"
                )));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &PolyRing {
        self.system.ring()
    }

    pub fn width(&self) -> usize {
        self.coefficients
            .iter()
            .map(|c| c.width())
            .max()
            .unwrap_or(1)
    }

    pub fn is_refutation(&self) -> bool {
        self.target.is_one()
    }

    /// Edits one coefficient; used to build corrupted inputs in tests.
    pub fn with_coefficient(mut self, i: usize, c: Roabp) -> Result<Self> {
        self.coefficients[i] = c;
        self.check_shape()?;
        Ok(self)
    }

    /// `sum_i c_i * a_i` expanded.
    pub fn expand_combination(&self, budget: usize) -> Result<SparsePoly> {
        let mut acc = SparsePoly::zero(self.ring());
        for (c, e) in self.coefficients.iter().zip(self.system.entries()) {
            if c.is_structurally_zero() {
                continue;
            }
            let q = c.expand(budget)?;
            acc = &acc + &(&q * &e.poly);
            if acc.sparsity() > budget {
                return Err(Error::ExpansionTooLarge(budget));
            }
        }
        Ok(acc)
    }

    pub fn verify(&self, mode: VerifyMode) -> Result<VerifyReport> {
        self.check_shape()?;
        let width = self.width();
        let (valid, error_bound, detail) = match mode {
            VerifyMode::Expand { budget } => {
                let lhs = self.expand_combination(budget)?;
                let ok = lhs == self.target;
                let detail = if ok {
                    "combination equals target".to_string()
                } else {
                    format!("combination minus target = {}", &lhs - &self.target)
                };
                (ok, Some(0.0), detail)
            }
            VerifyMode::Randomized { trials, seed } => {
                let (ok, per_trial) = self.randomized(trials, seed);
                let bound = per_trial.min(1.0).powi(trials as i32);
                (
                    ok,
                    Some(bound),
                    format!("{trials} random evaluations, per-trial error <= {per_trial:.3e}"),
                )
            }
            VerifyMode::Exact => {
                let diff = self.combined_program()?;
                let ok = diff.is_zero_exact();
                (
                    ok,
                    Some(0.0),
                    format!("coefficient-span zero test on width {}", diff.width()),
                )
            }
        };
        Ok(VerifyReport {
            valid,
            width,
            mode,
            error_bound,
            detail,
        })
    }

    fn randomized(&self, trials: usize, seed: u64) -> (bool, f64) {
        let field = self.ring().field();
        let mut vars: BTreeSet<Var> = self.order.iter().copied().collect();
        vars.extend(self.system.mentioned());
        vars.extend(self.target.variables());
        let deg = self
            .coefficients
            .iter()
            .zip(self.system.entries())
            .map(|(c, e)| c.degree_bound() + e.poly.degree() as usize)
            .chain(std::iter::once(self.target.degree() as usize))
            .max()
            .unwrap_or(0);
        let per_trial = deg as f64 / sample_set_size(field);
        let mut rng = crate::rng(seed);
        for _ in 0..trials {
            let pt: HashMap<Var, FieldElement> = vars
                .iter()
                .map(|v| (*v, random_element(field, &mut rng)))
                .collect();
            let val = |v: Var| pt[&v].clone();
            let mut acc = field.zero();
            for (c, e) in self.coefficients.iter().zip(self.system.entries()) {
                if c.is_structurally_zero() {
                    continue;
                }
                acc = &acc + &(&c.eval(val) * &e.poly.eval(val));
            }
            if acc != self.target.eval(val) {
                return (false, per_trial);
            }
        }
        (true, per_trial)
    }

    /// `sum_i c_i * A_i - T` as one program, with each axiom `A_i` built as
    /// a width-1 product when it is a clause translation.
    pub fn combined_program(&self) -> Result<Roabp> {
        let ring = self.ring();
        let mut acc = Roabp::from_sparse(&self.target, &self.order)?.neg();
        for (c, e) in self.coefficients.iter().zip(self.system.entries()) {
            if c.is_structurally_zero() {
                continue;
            }
            let a = axiom_program(ring, &e.poly, &self.order)?;
            acc = acc.add(&c.mul(&a)?)?;
        }
        Ok(acc)
    }

    pub fn to_file(&self) -> CertificateFile {
        let sys = self.system.to_file();
        CertificateFile {
            field: sys.field,
            order: self.ring().names(&self.order),
            roles: sys.roles,
            axioms: sys.polynomials,
            coefficients: self.coefficients.iter().map(|c| c.to_file()).collect(),
            target: self.target.to_string(),
        }
    }

    pub fn from_file(ring: &PolyRing, f: &CertificateFile) -> Result<Self> {
        let sys = SystemFile {
            field: f.field.clone(),
            roles: f.roles.clone(),
            polynomials: f.axioms.clone(),
        };
        let system = PolySystem::from_file(ring, &sys)?;
        let order = ring.vars(&f.order);
        let coefficients = f
            .coefficients
            .iter()
            .map(|c| Roabp::from_file(ring, c))
            .collect::<Result<Vec<_>>>()?;
        let target = parse_poly(ring, &f.target)?;
        LinearIpsCertificate::new(system, order, coefficients, target)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    /// Parses a certificate into a fresh ring over the field named in the file.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: CertificateFile = serde_json::from_str(text)?;
        let ring = PolyRing::new(Field::parse_tag(&f.field)?);
        LinearIpsCertificate::from_file(&ring, &f)
    }
}

/// Certificate file: the system's field, roles and axioms, the shared
/// order, one program per axiom (zero programs included) and the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub field: String,
    pub order: Vec<String>,
    pub roles: Vec<(String, crate::formulas::Role)>,
    pub axioms: Vec<SystemEntryFile>,
    pub coefficients: Vec<RoabpFile>,
    pub target: String,
}

/// roABP for an axiom: a width-1 product of linear factors for clause
/// translations, otherwise one path per monomial.
pub fn axiom_program(ring: &PolyRing, p: &SparsePoly, order: &[Var]) -> Result<Roabp> {
    let field = ring.field();
    if let Some(c) = as_clause(p) {
        let scale = p.terms().next().map(|(_, c)| c.clone()).expect("nonzero");
        let factors: HashMap<Var, UniPoly> = c
            .literals()
            .iter()
            .map(|l| {
                let f = if l.positive {
                    UniPoly::linear(field.one(), -&field.one())
                } else {
                    UniPoly::x(field)
                };
                (l.var, f)
            })
            .collect();
        return Roabp::product(ring, order, &factors, scale);
    }
    Roabp::from_sparse(p, order)
}
