//! Figures of merit and parameter scans.

mod compare;
mod metrics;
mod sweep;

pub use compare::{compare_full_vs_effective, CompareOptions, Comparison};
pub use metrics::{fidelity, partial_trace, purity, state_fidelity, trace_distance};
pub use sweep::{
    convergence_time, decoherence_contour, sweep_fidelity_2d, Axis, PointFailure, SweepAxis, SweepGrid,
    SweepMode, SweepOptions,
};
