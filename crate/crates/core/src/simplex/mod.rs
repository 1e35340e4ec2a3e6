//! σ-invariant states as points of a simplex, and everything computed from
//! their fidelity vectors.

mod criteria;
mod descriptor;
mod reduce;
mod transfer;
mod twirl;

pub use criteria::{
    appendix_fidelities, bisep_check, extremal_fidelities, fidelity_bound, is_sigma_ppt,
    separability_polytope_check, separability_ppt_all, FailedConstraint, Outcome,
    SeparabilityVerdict, POLYTOPE_TOL, PROJECTOR_TOL,
};
pub use descriptor::{
    ProductStateSpec, SignedFidelities, StateDescriptor, FIDELITY_NEG_TOL, FIDELITY_SUM_TOL,
    MAX_DESCRIPTOR_PAIRS,
};
pub use reduce::{reduce_mixed_pair, reduce_pair, MixedReduction};
pub use transfer::{transform_fidelities, x_matrix, y_matrix, z_matrix, TransferMatrix};
pub use twirl::{exact_twirl, fidelities_of, mc_twirl, overlaps, synthesize, TRACE_TOL};
