//! Monte Carlo wave-function unfolding of the effective feedback dynamics.
//!
//! Between detections the unnormalized state follows
//! `exp(−iH_eff t)` with `H_eff = H − (i/2)ΓJ₁⁺J₁⁻`. A detection happens
//! when `‖ψ̃‖²` drops below a uniform draw; the jump time is located by
//! bisection with a ladder of precomputed propagators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{collective_ops, drive_hamiltonian, singlet_state, FeedbackStrategy, Kick, SystemParams};
use crate::opalg::{expm, inner, norm, ComplexMatrix, C64};

/// Bisection depth: jump times are resolved to `dt / 2^LADDER`.
const LADDER: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryEnsemble {
    pub n_traj: usize,
    pub seed: u64,
    pub times: Vec<f64>,
    /// `√(mean |⟨S3|ψ⟩|²)` at each time.
    pub mean_fidelity: Vec<f64>,
    /// Detections per trajectory.
    pub jump_counts: Vec<u64>,
}

struct Unfolding {
    /// `ladder[k] = exp(−iH_eff dt / 2^k)`.
    ladder: Vec<ComplexMatrix>,
    jump: ComplexMatrix,
    kicks: Vec<Kick>,
    eta: f64,
    target: Vec<C64>,
}

struct Trajectory {
    populations: Vec<f64>,
    jumps: u64,
}

impl Unfolding {
    fn new(p: &SystemParams, strategy: &FeedbackStrategy, dt: f64) -> Result<Self> {
        p.validate()?;
        strategy.validate()?;
        let ops = collective_ops();
        let gamma = p.collective_rate();
        let mut h_eff = drive_hamiltonian(p);
        h_eff.add_scaled(C64::new(0.0, -0.5 * gamma), &(&ops.j1_plus * &ops.j1_minus));
        let ladder = (0..=LADDER)
            .map(|k| expm(&h_eff.scale(C64::new(0.0, -dt / (1u64 << k) as f64))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ladder,
            jump: ops.j1_minus,
            kicks: strategy.scheme()?.kicks(),
            eta: strategy.eta,
            target: singlet_state(),
        })
    }

    fn population(&self, psi: &[C64]) -> f64 {
        inner(&self.target, psi).norm_sqr() / norm(psi).powi(2)
    }

    fn detect(&self, psi: &[C64], rng: &mut ChaCha8Rng, t: f64) -> Result<Vec<C64>> {
        let mut out = self.jump.mat_vec(psi);
        let n = norm(&out);
        if !(n > 1e-300) {
            return Err(Error::NormUnderflow { t });
        }
        for z in out.iter_mut() {
            *z /= n;
        }
        if !self.kicks.is_empty() && rng.gen::<f64>() < self.eta {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut pick = self.kicks.len() - 1;
            for (i, k) in self.kicks.iter().enumerate() {
                acc += k.weight;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            out = self.kicks[pick].unitary.mat_vec(&out);
        }
        Ok(out)
    }

    fn run(&self, psi0: &[C64], steps: usize, dt: f64, seed: u64) -> Result<Trajectory> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut psi = psi0.to_vec();
        let mut threshold: f64 = rng.gen();
        let mut populations = Vec::with_capacity(steps + 1);
        populations.push(self.population(&psi));
        let mut jumps = 0;
        let units = 1u64 << LADDER;
        for step in 0..steps {
            // position inside the output interval, in ladder units; slices
            // are aligned powers of two no longer than `limit`
            let mut pos = 0u64;
            let mut limit = units;
            while pos < units {
                let mut len = limit;
                while !pos.is_multiple_of(len) || pos + len > units {
                    len >>= 1;
                }
                let k = (units / len).trailing_zeros() as usize;
                let cand = self.ladder[k].mat_vec(&psi);
                if norm(&cand).powi(2) >= threshold {
                    psi = cand;
                    pos += len;
                } else if len > 1 {
                    limit = len >> 1;
                } else {
                    let t = (step as f64 + pos as f64 / units as f64) * dt;
                    psi = self.detect(&cand, &mut rng, t)?;
                    jumps += 1;
                    threshold = rng.gen();
                    pos += 1;
                    limit = units;
                }
            }
            populations.push(self.population(&psi));
        }
        Ok(Trajectory { populations, jumps })
    }
}

/// Unfolds `n_traj` trajectories of the effective model with the given
/// feedback, starting from the pure state `psi0`. Trajectory `i` uses the
/// seed `seed + i`, so results do not depend on `threads`.
#[allow(clippy::too_many_arguments)]
pub fn run_trajectories(
    p: &SystemParams,
    strategy: &FeedbackStrategy,
    psi0: &[C64],
    t_end: f64,
    n_points: usize,
    n_traj: usize,
    seed: u64,
    threads: usize,
) -> Result<TrajectoryEnsemble> {
    if psi0.len() != 27 {
        return Err(Error::DimMismatch(format!("initial state of length {} for 27 levels", psi0.len())));
    }
    if (norm(psi0) - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParam {
            name: "psi0",
            reason: "initial state must be normalized".into(),
        });
    }
    if !(t_end > 0.0) || n_points < 2 || n_traj == 0 {
        return Err(Error::InvalidParam {
            name: "trajectories",
            reason: "need t_end > 0, n_points >= 2 and n_traj >= 1".into(),
        });
    }
    let steps = n_points - 1;
    let dt = t_end / steps as f64;
    let unfolding = Unfolding::new(p, strategy, dt)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Backend(e.to_string()))?;
    let runs: Vec<Result<Trajectory>> = pool.install(|| {
        (0..n_traj)
            .into_par_iter()
            .map(|i| unfolding.run(psi0, steps, dt, seed.wrapping_add(i as u64)))
            .collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut mean = vec![0.0; steps + 1];
    for r in &runs {
        for (m, p) in mean.iter_mut().zip(&r.populations) {
            *m += p;
        }
    }
    Ok(TrajectoryEnsemble {
        n_traj,
        seed,
        times: (0..=steps).map(|k| k as f64 * dt).collect(),
        mean_fidelity: mean.iter().map(|m| (m / n_traj as f64).max(0.0).sqrt().min(1.0)).collect(),
        jump_counts: runs.iter().map(|r| r.jumps).collect(),
    })
}
