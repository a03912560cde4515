use crate::dynamics::{evolve, EvolutionResult, EvolveOptions};
use crate::error::{Error, Result};
use crate::model::{build_feedback_me, build_full_me, product_state, FeedbackStrategy, SystemParams};

#[derive(Clone, Debug, PartialEq)]
pub struct CompareOptions {
    pub n_points: usize,
    /// Propagator for the three-mode model.
    pub full_propagator: String,
    pub effective_propagator: String,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            n_points: 151,
            full_propagator: "krylov".into(),
            effective_propagator: "dopri5".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub times: Vec<f64>,
    /// Atomic fidelity of the three-mode model (modes traced out).
    pub full: Vec<f64>,
    pub effective: Vec<f64>,
    pub max_gap: f64,
    pub full_run: EvolutionResult,
    pub effective_run: EvolutionResult,
}

/// Runs the three-mode model from `|111⟩⊗|vac⟩` and the effective feedback
/// model from `|111⟩` on the same grid and reports the largest pointwise
/// fidelity gap.
pub fn compare_full_vs_effective(
    p: &SystemParams,
    strategy: &FeedbackStrategy,
    t_end: f64,
    opts: &CompareOptions,
) -> Result<Comparison> {
    if opts.n_points < 2 {
        return Err(Error::InvalidParam {
            name: "n_points",
            reason: "output grid needs at least two points".into(),
        });
    }
    let full_gen = build_full_me(p, strategy)?;
    let eff_gen = build_feedback_me(p, strategy)?;
    let full_run = evolve(
        &full_gen,
        &product_state([1, 1, 1], full_gen.mode_dim()),
        t_end,
        &EvolveOptions::default()
            .with_points(opts.n_points)
            .with_propagator(&opts.full_propagator),
    )?;
    let effective_run = evolve(
        &eff_gen,
        &product_state([1, 1, 1], 1),
        t_end,
        &EvolveOptions::default()
            .with_points(opts.n_points)
            .with_propagator(&opts.effective_propagator),
    )?;
    let max_gap = full_run
        .fidelities
        .iter()
        .zip(&effective_run.fidelities)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Comparison {
        times: full_run.times.clone(),
        full: full_run.fidelities.clone(),
        effective: effective_run.fidelities.clone(),
        max_gap,
        full_run,
        effective_run,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{basis_state, FeedbackKind};
    use crate::opalg::ComplexMatrix;
    use std::f64::consts::PI;

    #[test]
    fn uncoupled_models_agree() {
        // G = 0: no decay, both models see only the drive on the atoms
        let p = SystemParams {
            coupling: 0.0,
            drive: 0.05,
            ..SystemParams::default()
        }
        .with_detuning(20.0);
        let s = FeedbackStrategy::new(FeedbackKind::Nonlocal, 0.3 * PI, 1.0).unwrap();
        let opts = CompareOptions {
            n_points: 6,
            ..CompareOptions::default()
        };
        let c = compare_full_vs_effective(&p, &s, 20.0, &opts).unwrap();
        assert!(c.max_gap < 1e-7, "gap {}", c.max_gap);

        let p111 = ComplexMatrix::projector(&basis_state([1, 1, 1]));
        let full_gen = build_full_me(&p, &s).unwrap();
        let m = full_gen.mode_dim();
        let run = |gen: &crate::model::Generator, obs: ComplexMatrix, m: usize| {
            let eo = EvolveOptions {
                observables: vec![obs],
                ..EvolveOptions::default().with_points(6)
            };
            evolve(gen, &product_state([1, 1, 1], m), 20.0, &eo).unwrap().observables.remove(0)
        };
        let full = run(&full_gen, crate::opalg::kron(&p111, &ComplexMatrix::identity(m)), m);
        let eff = run(&build_feedback_me(&p, &s).unwrap(), p111, 1);
        assert!(full[5] < 0.9);
        for (a, b) in full.iter().zip(&eff) {
            assert!((a - b).abs() < 1e-7);
        }
    }
}
