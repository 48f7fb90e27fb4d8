//! JSON form of tree-like PC proofs.

use roabp_ips::algebra::{parse_poly, PolyRing};
use roabp_ips::upperbounds::{PcLine, PcProof, PcRule};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleFile {
    Axiom(usize),
    MulVar(usize, String),
    LinComb(usize, usize, String, String),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LineFile {
    pub poly: String,
    pub rule: RuleFile,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProofFile {
    pub lines: Vec<LineFile>,
}

pub fn to_file(ring: &PolyRing, p: &PcProof) -> ProofFile {
    let lines = p
        .lines
        .iter()
        .map(|l| LineFile {
            poly: l.poly.to_string(),
            rule: match &l.rule {
                PcRule::Axiom(j) => RuleFile::Axiom(*j),
                PcRule::MulVar(i, v) => RuleFile::MulVar(*i, ring.name(*v)),
                PcRule::LinComb(i, j, a, b) => {
                    RuleFile::LinComb(*i, *j, a.to_string(), b.to_string())
                }
            },
        })
        .collect();
    ProofFile { lines }
}

pub fn from_file(ring: &PolyRing, f: &ProofFile) -> Result<PcProof, CliError> {
    let field = ring.field();
    let mut lines = Vec::with_capacity(f.lines.len());
    for l in &f.lines {
        let rule = match &l.rule {
            RuleFile::Axiom(j) => PcRule::Axiom(*j),
            RuleFile::MulVar(i, v) => PcRule::MulVar(
                *i,
                ring.lookup(v).ok_or_else(|| {
                    CliError::Usage(format!("proof mentions unknown variable `{v}`"))
                })?,
            ),
            RuleFile::LinComb(i, j, a, b) => {
                PcRule::LinComb(*i, *j, field.parse_element(a)?, field.parse_element(b)?)
            }
        };
        lines.push(PcLine {
            poly: parse_poly(ring, &l.poly)?,
            rule,
        });
    }
    Ok(PcProof { lines })
}
