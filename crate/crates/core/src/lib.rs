pub mod acceptance;
pub mod algebra;
pub mod certificate;
pub mod error;
pub mod formulas;
pub mod instances;
pub mod interpolate;
pub mod normalform;
pub mod roabp;
pub mod spanprog;
pub mod upperbounds;

pub use error::{Error, Result};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used by every randomized routine.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
