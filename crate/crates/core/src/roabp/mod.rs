//! Read-once oblivious algebraic branching programs and their closure
//! operations.

mod layer;
mod program;
mod serial;
mod unipoly;

pub use layer::{Layer, ScalarMatrix};
pub use program::{
    random_element, roabp_expand, sample_set_size, CutDecomposition, PitMode, Roabp,
    DEFAULT_EXPANSION_BUDGET,
};
pub use serial::RoabpFile;
pub use unipoly::UniPoly;

#[cfg(test)]
mod tests;
