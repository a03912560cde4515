//! Stationary states of a generator.

use super::propagators::{propagator_registry, Tolerances};
use crate::error::{Error, Result};
use crate::model::Generator;
use crate::opalg::{devectorize, lu_solve_faer, null_space, to_faer, ComplexMatrix, C64, KERNEL_TOL};
use crate::registry::Registry;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyOptions {
    /// Singular-value threshold for kernel detection.
    pub kernel_tol: f64,
    /// Horizon for the evolution-based solver.
    pub t_long: f64,
    /// `‖𝓛ρ‖_F` below which the evolution-based solver stops.
    pub residual_tol: f64,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        Self {
            kernel_tol: KERNEL_TOL,
            t_long: 1e4,
            residual_tol: 1e-9,
        }
    }
}

pub trait SteadySolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, gen: &Generator) -> Result<ComplexMatrix>;
}

/// Kernel of the materialized Liouvillian via SVD; reports degenerate kernels.
pub struct NullSpaceSolver {
    pub tol: f64,
}

/// LU solve of `𝓛 vec(ρ) = 0` with one row replaced by `tr ρ = 1`. Assumes a
/// unique steady state.
pub struct DirectSolver;

/// Long-time evolution from the maximally mixed state.
pub struct EvolutionSolver {
    pub t_long: f64,
    pub tol: f64,
}

impl SteadySolver for NullSpaceSolver {
    fn name(&self) -> &'static str {
        "nullspace"
    }
    fn solve(&self, gen: &Generator) -> Result<ComplexMatrix> {
        let l = gen.liouvillian()?;
        let kernel = null_space(&l, self.tol)?;
        if kernel.len() != 1 {
            return Err(Error::DegenerateKernel(kernel.len()));
        }
        normalize(devectorize(&kernel[0], gen.dim())?)
    }
}

impl SteadySolver for DirectSolver {
    fn name(&self) -> &'static str {
        "direct"
    }
    fn solve(&self, gen: &Generator) -> Result<ComplexMatrix> {
        let d = gen.dim();
        let l = gen.liouvillian()?;
        let mut a = to_faer(l.matrix());
        // row 0 becomes the trace functional: entries at diagonal positions j·d + j
        for c in 0..d * d {
            a[(0, c)] = C64::new(0.0, 0.0);
        }
        for j in 0..d {
            a[(0, j * d + j)] = C64::new(1.0, 0.0);
        }
        let mut rhs = vec![C64::new(0.0, 0.0); d * d];
        rhs[0] = C64::new(1.0, 0.0);
        let v = lu_solve_faer(a, &rhs)?;
        normalize(devectorize(&v, d)?)
    }
}

impl SteadySolver for EvolutionSolver {
    fn name(&self) -> &'static str {
        "evolution"
    }
    fn solve(&self, gen: &Generator) -> Result<ComplexMatrix> {
        steady_state_by_evolution(gen, self.t_long, self.tol)
    }
}

pub fn steady_registry() -> Registry<SteadyOptions, dyn SteadySolver> {
    Registry::new("steady-state solver")
        .with("nullspace", |o: &SteadyOptions| -> Box<dyn SteadySolver> { Box::new(NullSpaceSolver { tol: o.kernel_tol }) })
        .with("direct", |_| -> Box<dyn SteadySolver> { Box::new(DirectSolver) })
        .with("evolution", |o: &SteadyOptions| -> Box<dyn SteadySolver> {
            Box::new(EvolutionSolver {
                t_long: o.t_long,
                tol: o.residual_tol,
            })
        })
}

fn normalize(mut rho: ComplexMatrix) -> Result<ComplexMatrix> {
    let tr = rho.trace();
    if tr.norm() < 1e-300 {
        return Err(Error::Backend("kernel vector has zero trace".into()));
    }
    rho = rho.scale(tr.inv());
    rho.hermitize();
    let tr = rho.trace().re;
    Ok(rho.scale_real(1.0 / tr))
}

/// Unique steady state via the null space of the Liouvillian.
pub fn steady_state(gen: &Generator) -> Result<ComplexMatrix> {
    NullSpaceSolver { tol: KERNEL_TOL }.solve(gen)
}

/// `‖𝓛ρ‖_F`.
pub fn residual(gen: &Generator, rho: &ComplexMatrix) -> f64 {
    gen.compile().apply(rho).frobenius_norm()
}

/// Evolves `I/d` until `‖𝓛ρ‖_F < tol` or `t_long` is reached.
pub fn steady_state_by_evolution(gen: &Generator, t_long: f64, tol: f64) -> Result<ComplexMatrix> {
    let d = gen.dim();
    let compiled = gen.compile();
    let mut stepper = propagator_registry().create("dopri5", &Tolerances { rtol: 1e-10, atol: 1e-12 })?;
    let mut rho = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    let check = |rho: &ComplexMatrix| compiled.apply(rho).frobenius_norm();
    let mut res = check(&rho);
    let mut t = 0.0;
    // checkpoints grow geometrically from a fraction of the slowest rate
    let mut dt = (t_long / 1e4).max(1e-3);
    while res >= tol {
        if t >= t_long {
            return Err(Error::NotConverged { residual: res, t });
        }
        let next = (t + dt).min(t_long);
        stepper.advance(&compiled, rho.data_mut(), t, next)?;
        t = next;
        res = check(&rho);
        dt *= 1.25;
    }
    let tr = rho.trace().re;
    Ok(rho.scale_real(1.0 / tr))
}
