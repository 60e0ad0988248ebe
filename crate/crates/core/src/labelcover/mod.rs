//! Label cover instances, arc-consistency enforcement, the partial
//! homomorphism instances `σ_k`, and the consistency reductions built from
//! them with the universal gadget.

mod consistency;
mod instance;

pub use instance::{LabelCoverInstance, LcConstraint, LcSignature, LcVariable};
pub use consistency::{
    arc_consistency_reduce, arc_consistent_families, enforce_arc_consistency, k_consistency_instance,
    k_consistency_reduce, k_consistency_test, sigma_k, uncovered_tuples,
};
