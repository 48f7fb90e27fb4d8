//! Linear IPS certificates: representation, verification, composition and
//! refutation oracles.

mod cert;
mod compose;
mod search;

pub use cert::{axiom_program, CertificateFile, LinearIpsCertificate, VerifyMode, VerifyReport};
pub use compose::{compose_derivation, identity_derivation};
pub use search::{
    decision_tree, find_ns_refutation, find_ns_refutation_with_budget, refute_by_search,
    tree_certificate, DecisionTree, DEFAULT_NS_UNKNOWNS, DEFAULT_TREE_NODES,
};
