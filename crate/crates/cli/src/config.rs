use roabp_ips::algebra::{Field, PolyRing, Var};
use roabp_ips::interpolate::DEFAULT_Z_BUDGET;
use roabp_ips::roabp::DEFAULT_EXPANSION_BUDGET;

use crate::args::Global;
use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 2024;

/// Settings shared by all commands.
#[derive(Clone, Debug)]
pub struct Config {
    /// `None` means: take the field recorded in the input file.
    pub field: Option<Field>,
    pub order: Option<Vec<String>>,
    pub expansion_budget: usize,
    /// Largest z-block enumerated by interpolant checks.
    pub enumeration_budget: usize,
    pub seed: u64,
}

impl Config {
    pub fn from_global(g: &Global) -> Result<Config, CliError> {
        let field = g.field.as_deref().map(Field::parse_tag).transpose()?;
        let order = g.order.as_ref().map(|s| {
            s.split(',')
                .map(|t| t.trim().to_string())
                .filter(|t| !t.is_empty())
                .collect()
        });
        let expansion_budget = g.budget.unwrap_or(DEFAULT_EXPANSION_BUDGET);
        if expansion_budget == 0 {
            return Err(CliError::Usage("--budget must be positive".into()));
        }
        Ok(Config {
            field,
            order,
            expansion_budget,
            enumeration_budget: DEFAULT_Z_BUDGET,
            seed: g.seed.unwrap_or(DEFAULT_SEED),
        })
    }

    /// Ring for freshly built instances.
    pub fn ring(&self) -> PolyRing {
        PolyRing::new(self.field.unwrap_or_default())
    }

    /// Ring for a file recorded over `tag`; an explicit `--field` must agree.
    pub fn ring_for(&self, tag: &str) -> Result<PolyRing, CliError> {
        let recorded = Field::parse_tag(tag)?;
        match self.field {
            Some(f) if f != recorded => Err(CliError::Usage(format!(
                "--field {} does not match the file's field {}",
                f.tag(),
                recorded.tag()
            ))),
            _ => Ok(PolyRing::new(recorded)),
        }
    }

    /// The `--order` variables; every name must already be known.
    pub fn order_in(&self, ring: &PolyRing) -> Result<Option<Vec<Var>>, CliError> {
        let Some(names) = &self.order else {
            return Ok(None);
        };
        names
            .iter()
            .map(|n| {
                ring.lookup(n)
                    .ok_or_else(|| CliError::Usage(format!("--order names unknown variable `{n}`")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}
