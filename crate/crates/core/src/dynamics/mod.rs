//! Time evolution, steady states and quantum-jump unfolding.

mod evolve;
mod oracle;
mod propagators;
mod steady;
mod trajectories;

pub use evolve::{evolve, validate_state, EvolutionResult, EvolveOptions};
pub use oracle::{appendix_oracle, oscillation_frequency, AppendixOracle, LambdaSystem};
pub use propagators::{propagator_registry, Dopri5, Krylov, Propagator, Tolerances};
pub use steady::{
    residual, steady_registry, steady_state, steady_state_by_evolution, DirectSolver, EvolutionSolver,
    NullSpaceSolver, SteadyOptions, SteadySolver,
};
pub use trajectories::{run_trajectories, TrajectoryEnsemble};
