//! Single-atom elimination check: a Λ system with a far-detuned excited
//! level `|e⟩` against its two-level effective model.

use super::evolve::{evolve, EvolutionResult, EvolveOptions};
use crate::error::{Error, Result};
use crate::model::Generator;
use crate::opalg::{ComplexMatrix, LindbladTerm, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaSystem {
    pub lambda_a: f64,
    pub lambda_b: f64,
    /// Decay `|e⟩ → |0⟩`.
    pub gamma1: f64,
    /// Decay `|e⟩ → |1⟩`.
    pub gamma2: f64,
    pub detuning: f64,
}

impl LambdaSystem {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda_a", self.lambda_a),
            ("lambda_b", self.lambda_b),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParam {
                    name,
                    reason: format!("must be finite and >= 0, got {v}"),
                });
            }
        }
        if !(self.detuning.is_finite() && self.detuning != 0.0) {
            return Err(Error::InvalidParam {
                name: "detuning",
                reason: "must be finite and non-zero".into(),
            });
        }
        Ok(())
    }

    /// Levels `|0⟩, |1⟩, |e⟩`:
    /// `H = λa|e⟩⟨0| + λb|e⟩⟨1| + h.c. − Δ|e⟩⟨e|`, decay `γ₁𝓓[|0⟩⟨e|] + γ₂𝓓[|1⟩⟨e|]`.
    pub fn three_level(&self) -> Result<Generator> {
        self.validate()?;
        let mut h = ComplexMatrix::zeros(3, 3);
        h[(2, 0)] = C64::new(self.lambda_a, 0.0);
        h[(0, 2)] = C64::new(self.lambda_a, 0.0);
        h[(2, 1)] = C64::new(self.lambda_b, 0.0);
        h[(1, 2)] = C64::new(self.lambda_b, 0.0);
        h[(2, 2)] = C64::new(-self.detuning, 0.0);
        let terms = vec![
            LindbladTerm::new(self.gamma1, ComplexMatrix::ket_bra(3, 0, 2))?,
            LindbladTerm::new(self.gamma2, ComplexMatrix::ket_bra(3, 1, 2))?,
        ];
        Generator::new(h, terms, 3)
    }

    /// Ground manifold after eliminating `|e⟩`:
    /// `H = (1/Δ)|φ⟩⟨φ|` with `|φ⟩ = λa|0⟩ + λb|1⟩`, jumps
    /// `(γⱼ/Δ²)𝓓[|j⟩⟨φ|]`.
    pub fn effective(&self) -> Result<Generator> {
        self.validate()?;
        let phi = [C64::new(self.lambda_a, 0.0), C64::new(self.lambda_b, 0.0)];
        let h = ComplexMatrix::outer(&phi, &phi).scale_real(1.0 / self.detuning);
        let d2 = self.detuning * self.detuning;
        let jump = |j: usize| {
            let mut ket = [C64::new(0.0, 0.0); 2];
            ket[j] = C64::new(1.0, 0.0);
            ComplexMatrix::outer(&ket, &phi)
        };
        let terms = vec![
            LindbladTerm::new(self.gamma1 / d2, jump(0))?,
            LindbladTerm::new(self.gamma2 / d2, jump(1))?,
        ];
        Generator::new(h, terms, 2)
    }

    /// Angular frequency `2λaλb/Δ` of the Raman population oscillation.
    pub fn raman_frequency(&self) -> f64 {
        2.0 * self.lambda_a * self.lambda_b / self.detuning.abs()
    }
}

#[derive(Clone, Debug)]
pub struct AppendixOracle {
    pub full: EvolutionResult,
    pub effective: EvolutionResult,
    /// Largest ground-population difference over the grid.
    pub max_deviation: f64,
}

/// Evolves both models from `|0⟩` and compares `P₀`, `P₁` on a shared grid.
/// The recorded observables are `[P₀, P₁]`.
pub fn appendix_oracle(sys: &LambdaSystem, t_end: f64, n_points: usize) -> Result<AppendixOracle> {
    let full_gen = sys.three_level()?;
    let eff_gen = sys.effective()?;
    let opts = |d: usize| {
        let mut target = vec![C64::new(0.0, 0.0); d];
        target[0] = C64::new(1.0, 0.0);
        EvolveOptions {
            target,
            observables: vec![ComplexMatrix::ket_bra(d, 0, 0), ComplexMatrix::ket_bra(d, 1, 1)],
            ..EvolveOptions::default().with_points(n_points)
        }
    };
    let full = evolve(&full_gen, &ComplexMatrix::ket_bra(3, 0, 0), t_end, &opts(3))?;
    let effective = evolve(&eff_gen, &ComplexMatrix::ket_bra(2, 0, 0), t_end, &opts(2))?;
    let mut max_deviation: f64 = 0.0;
    for k in 0..2 {
        for (a, b) in full.observables[k].iter().zip(&effective.observables[k]) {
            max_deviation = max_deviation.max((a - b).abs());
        }
    }
    Ok(AppendixOracle {
        full,
        effective,
        max_deviation,
    })
}

/// Angular frequency of a population oscillation, from the spacing of its
/// crossings of the midpoint between the extremes (linear interpolation).
/// Returns `None` with fewer than two crossings.
pub fn oscillation_frequency(times: &[f64], series: &[f64]) -> Option<f64> {
    let lo = series.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    let mut crossings = Vec::new();
    for i in 1..series.len() {
        let (a, b) = (series[i - 1] - mid, series[i] - mid);
        if a == 0.0 || a.signum() != b.signum() && b != 0.0 {
            let frac = a / (a - b);
            crossings.push(times[i - 1] + frac * (times[i] - times[i - 1]));
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    // consecutive crossings are half a period apart
    Some(std::f64::consts::PI * (crossings.len() - 1) as f64 / span)
}
