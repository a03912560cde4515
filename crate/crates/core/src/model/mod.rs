//! Physical model: qutrit states and collective operators, feedback
//! kicks, parameters and generator builders.

pub mod builders;
pub mod feedback;
pub mod generator;
pub mod params;
pub mod states;

pub use builders::{
    build_cavity_me, build_effective_me, build_feedback_me, build_full_me, build_spontaneous_channels,
    drive_hamiltonian, model_registry, product_state, ModelBuilder,
};
pub use feedback::{
    feedback_registry, feedback_unitaries_local, feedback_unitary_nonlocal, FeedbackKind, FeedbackScheme,
    FeedbackStrategy, Kick,
};
pub use generator::{ApplyScratch, CompiledGenerator, Generator};
pub use params::{RawDrives, SystemParams};
pub use states::{basis_state, collective_ops, singlet_state, CollectiveOps, ATOM_DIM};
