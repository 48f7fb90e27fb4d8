//! Hard-instance generators: the GEN function and its split formula, and the
//! order-independent lifting with its restriction back to the base formula.

mod circuit;
mod gen;
mod lift;

pub use circuit::{BooleanCircuit, Gate, Node};
pub use gen::{gen_circuit, gen_eval, gen_split_formula, GenInstance, GenSplit};
pub use lift::{
    apply_restriction_to_certificate, lift, pad_to_three, restriction_for_order, LiftedFormula,
    Restriction, Selector,
};

#[cfg(test)]
mod tests;
