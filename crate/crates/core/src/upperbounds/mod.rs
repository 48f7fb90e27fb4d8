//! Explicit refutation builders: Tseitin formulas through the +-1 basis,
//! the functional pigeonhole principle through a symmetric count-tracking
//! program, and the simulation of tree-like Polynomial Calculus.

mod fphp;
mod pc;
mod tseitin;

pub use fphp::{fphp, pigeon_identity_holds, refute_fphp, FphpRefutation};
pub use pc::{pc_from_decision_tree, simulate_treelike_pc, PcLine, PcProof, PcRule, PcSimulation};
pub use tseitin::{refute_tseitin, TseitinInstance, TseitinRefutation};
