//! Clauses and CNFs, DIMACS, polynomial systems and satisfiability oracles.

mod cnf;
mod sat;
mod system;

pub use cnf::{emit_dimacs, parse_dimacs, Clause, Cnf, Literal, Normalized, ParsedDimacs};
pub use sat::{
    as_clause, brute_force_sat, brute_force_sat_with_budget, dpll, enumerate_models, SatResult,
    DEFAULT_ENUMERATION_BUDGET,
};
pub use system::{
    split_from_cnfs, split_system, translate_clause, translate_cnf, translate_with_roles, Entry,
    Kind, Part, PolySystem, Role, SystemEntryFile, SystemFile,
};
