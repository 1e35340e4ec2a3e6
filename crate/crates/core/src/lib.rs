//! Unitary-invariant states of 2K qudits.
//!
//! The Hilbert space is `H_1 ⊗ … ⊗ H_2K` with `H_i = C^d`. Subsystem `i`
//! (Alice `i`) is paired with subsystem `K + i` (Bob `i`). A binary vector
//! `σ` selects, per pair, whether the state is invariant under `U ⊗ U`
//! (`σ_i = 0`, Werner type) or `U ⊗ conj(U)` (`σ_i = 1`, isotropic type).
//! Every σ-invariant state is a point of a `(2^K − 1)`-simplex whose
//! barycentric coordinates are the fidelities `f_α = Tr(ρ Π^α_(σ))`.
//!
//! * [`tensor`]: dense operators on `(C^d)^{⊗n}`, partial trace/transpose,
//!   Hermitian eigenvalues, Haar sampling and the `QOPB` / JSON formats.
//! * [`projectors`]: flip, `P⁺`, the `Q^α` / `P^α` families and their
//!   2K-partite products `Π^α_(σ)`.
//! * [`simplex`]: state descriptors, twirls, fidelity transfer matrices,
//!   PPT and separability criteria, reductions.
//! * [`verify`]: the self-check suite behind `invstates verify`.

pub mod error;
pub mod json;
pub mod projectors;
pub mod simplex;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use projectors::BinaryVector;
pub use simplex::{SeparabilityVerdict, StateDescriptor};
pub use tensor::{Operator, Rng, SubsystemSet};

/// Largest local dimension supported by the dense routines.
pub const MAX_LOCAL_DIM: usize = 4;
/// Largest number of Alice–Bob pairs supported by the dense routines.
pub const MAX_PAIRS: usize = 3;
