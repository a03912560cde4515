use super::propagators::{propagator_registry, Tolerances};
use crate::analysis::{fidelity, partial_trace, purity};
use crate::error::{Error, Result};
use crate::model::{singlet_state, Generator};
use crate::opalg::{min_eigenvalue, ComplexMatrix, C64};

/// Input-state tolerance for Hermiticity, trace and positivity.
const STATE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    /// Output grid size including `t = 0`.
    pub n_points: usize,
    pub propagator: String,
    pub tolerances: Tolerances,
    /// Pure target on the atomic factor; fidelities use the reduced state.
    pub target: Vec<C64>,
    /// Extra operators whose real expectation values are recorded.
    pub observables: Vec<ComplexMatrix>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            n_points: 101,
            propagator: "dopri5".into(),
            tolerances: Tolerances::default(),
            target: singlet_state(),
            observables: Vec::new(),
        }
    }
}

impl EvolveOptions {
    pub fn with_points(mut self, n_points: usize) -> Self {
        self.n_points = n_points;
        self
    }

    pub fn with_propagator(mut self, name: &str) -> Self {
        self.propagator = name.to_string();
        self
    }
}

/// Sampled time series of one evolution.
#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub traces: Vec<f64>,
    pub purities: Vec<f64>,
    pub min_eigenvalues: Vec<f64>,
    /// `observables[k][i]` is the k-th observable at `times[i]`.
    pub observables: Vec<Vec<f64>>,
    pub final_rho: ComplexMatrix,
    pub evaluations: usize,
}

impl EvolutionResult {
    pub fn final_fidelity(&self) -> f64 {
        *self.fidelities.last().expect("grid has at least two points")
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.traces.iter().map(|t| (t - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Checks that `rho` is a density matrix of dimension `d`.
pub fn validate_state(rho: &ComplexMatrix, d: usize) -> Result<()> {
    let n = rho.ensure_square()?;
    if n != d {
        return Err(Error::DimMismatch(format!("state of dimension {n} for generator of dimension {d}")));
    }
    let dev = rho.hermitian_deviation();
    if dev > STATE_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::InvalidParam {
            name: "rho0",
            reason: format!("trace must be 1, got {tr}"),
        });
    }
    let lo = min_eigenvalue(rho)?;
    if lo < -STATE_TOL {
        return Err(Error::InvalidParam {
            name: "rho0",
            reason: format!("not positive semidefinite (min eigenvalue {lo:e})"),
        });
    }
    Ok(())
}

fn sample(
    gen: &Generator,
    rho: &ComplexMatrix,
    opts: &EvolveOptions,
    out: &mut EvolutionResult,
    t: f64,
) -> Result<()> {
    let reduced = partial_trace(rho, gen.atom_dim())?;
    out.times.push(t);
    out.fidelities.push(fidelity(&opts.target, &reduced)?);
    out.traces.push(rho.trace().re);
    out.purities.push(purity(rho));
    out.min_eigenvalues.push(min_eigenvalue(rho)?);
    for (series, op) in out.observables.iter_mut().zip(&opts.observables) {
        let v: C64 = op.data().iter().zip(rho.transpose().data()).map(|(a, b)| a * b).sum();
        series.push(v.re);
    }
    Ok(())
}

/// Integrates `ρ̇ = 𝓛ρ` from `rho0` to `t_end`, sampling on a uniform grid.
pub fn evolve(gen: &Generator, rho0: &ComplexMatrix, t_end: f64, opts: &EvolveOptions) -> Result<EvolutionResult> {
    let d = gen.dim();
    validate_state(rho0, d)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParam {
            name: "t_end",
            reason: format!("must be finite and > 0, got {t_end}"),
        });
    }
    if opts.n_points < 2 {
        return Err(Error::InvalidParam {
            name: "n_points",
            reason: "output grid needs at least two points".into(),
        });
    }
    if opts.target.len() != gen.atom_dim() {
        return Err(Error::DimMismatch(format!(
            "target of length {} for atomic dimension {}",
            opts.target.len(),
            gen.atom_dim()
        )));
    }
    for op in &opts.observables {
        if op.rows() != d || !op.is_square() {
            return Err(Error::DimMismatch(format!("observable {}x{} for dimension {d}", op.rows(), op.cols())));
        }
    }
    let compiled = gen.compile();
    let mut stepper = propagator_registry().create(&opts.propagator, &opts.tolerances)?;
    let mut result = EvolutionResult {
        times: Vec::with_capacity(opts.n_points),
        fidelities: Vec::with_capacity(opts.n_points),
        traces: Vec::with_capacity(opts.n_points),
        purities: Vec::with_capacity(opts.n_points),
        min_eigenvalues: Vec::with_capacity(opts.n_points),
        observables: vec![Vec::with_capacity(opts.n_points); opts.observables.len()],
        final_rho: rho0.clone(),
        evaluations: 0,
    };
    let mut rho = rho0.clone();
    rho.hermitize();
    sample(gen, &rho, opts, &mut result, 0.0)?;
    let steps = opts.n_points - 1;
    let mut t_prev = 0.0;
    for k in 1..=steps {
        let t = t_end * k as f64 / steps as f64;
        stepper.advance(&compiled, rho.data_mut(), t_prev, t)?;
        sample(gen, &rho, opts, &mut result, t)?;
        t_prev = t;
    }
    result.evaluations = stepper.evaluations();
    result.final_rho = rho;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_effective_me, build_feedback_me, product_state, FeedbackKind, FeedbackStrategy, SystemParams};
    use std::f64::consts::PI;

    #[test]
    fn zero_generator_keeps_state() {
        let g = Generator::zero(27);
        let rho0 = product_state([0, 1, 2], 1);
        let r = evolve(&g, &rho0, 5.0, &EvolveOptions::default().with_points(6)).unwrap();
        assert_eq!(r.final_rho, rho0);
        assert!(r.fidelities.iter().all(|f| (f - r.fidelities[0]).abs() < 1e-15));
        assert_eq!(r.times.len(), 6);
        assert_eq!(r.times[5], 5.0);
    }

    #[test]
    fn singlet_stays_put_under_collective_decay() {
        let g = build_effective_me(&SystemParams::effective(0.5, 0.0, 1.0)).unwrap();
        let rho0 = ComplexMatrix::projector(&singlet_state());
        let r = evolve(&g, &rho0, 50.0, &EvolveOptions::default().with_points(11)).unwrap();
        for f in &r.fidelities {
            assert!((f - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_invalid_initial_states() {
        let g = Generator::zero(2);
        let opts = EvolveOptions {
            target: vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            ..EvolveOptions::default()
        };
        let half = ComplexMatrix::identity(2).scale_real(0.4);
        assert!(evolve(&g, &half, 1.0, &opts).is_err());
        let neg = ComplexMatrix::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]).unwrap();
        assert!(evolve(&g, &neg, 1.0, &opts).is_err());
        let ok = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(evolve(&g, &ok, 0.0, &opts).is_err());
        assert!(evolve(&g, &ok, 1.0, &opts.clone().with_points(1)).is_err());
        assert!(evolve(&g, &ok, 1.0, &opts.with_propagator("euler")).is_err());
    }

    #[test]
    fn propagators_agree_on_feedback_dynamics() {
        let s = FeedbackStrategy::new(FeedbackKind::Nonlocal, 0.3 * PI, 1.0).unwrap();
        let g = build_feedback_me(&SystemParams::effective(0.5, s.omega_fb, 1.0), &s).unwrap();
        let rho0 = product_state([1, 1, 1], 1);
        let a = evolve(&g, &rho0, 20.0, &EvolveOptions::default().with_points(5)).unwrap();
        let b = evolve(&g, &rho0, 20.0, &EvolveOptions::default().with_points(5).with_propagator("krylov")).unwrap();
        for (x, y) in a.fidelities.iter().zip(&b.fidelities) {
            assert!((x - y).abs() < 1e-6);
        }
        assert!(a.max_trace_drift() < 1e-10 && b.max_trace_drift() < 1e-10);
    }

    #[test]
    fn observables_are_recorded() {
        let g = build_effective_me(&SystemParams::effective(0.0, 0.0, 1.0)).unwrap();
        let rho0 = product_state([1, 1, 1], 1);
        let opts = EvolveOptions {
            observables: vec![rho0.clone()],
            ..EvolveOptions::default().with_points(3)
        };
        let r = evolve(&g, &rho0, 1.0, &opts).unwrap();
        assert_eq!(r.observables[0], vec![1.0, 1.0, 1.0]);
    }
}
