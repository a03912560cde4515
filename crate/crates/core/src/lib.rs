//! Simulation of the dissipative preparation of the three-atom singlet
//! state `|S3⟩` in an array of three coupled cavities, stabilized by
//! quantum-jump feedback.
//!
//! The crate is organized bottom-up:
//!
//! * [`opalg`]: dense complex matrices, Kronecker products, vectorization,
//!   Liouvillians, null spaces and Hermitian eigensolvers.
//! * [`model`]: states, collective operators, feedback unitaries and the
//!   master-equation builders (effective, single-cavity, three-mode).
//! * [`dynamics`]: time evolution, steady states, quantum-jump trajectories
//!   and the single-atom elimination oracle.
//! * [`analysis`]: fidelities, parameter sweeps, convergence times and the
//!   full-versus-effective comparison.
//!
//! Interchangeable algorithms (feedback schemes, model builders,
//! propagators, steady-state solvers) sit behind traits and are looked up
//! by name in a [`registry::Registry`].

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod opalg;
pub mod registry;

pub use error::{Error, Result};
