//! Two-dimensional fidelity scans and convergence times.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::metrics::fidelity;
use crate::dynamics::{evolve, steady_state, EvolutionResult, EvolveOptions};
use crate::error::{Error, Result};
use crate::model::{model_registry, product_state, singlet_state, FeedbackStrategy, SystemParams};

/// Parameter that can label a sweep axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    /// `Ω/Γ` at the point's `G` and `κ`.
    DriveOverGamma,
    OmegaFb,
    /// `γ/g`; also sets `γ′`.
    GammaOverG,
    KappaOverG,
    Eta,
}

impl Axis {
    pub const ALL: [Axis; 5] = [
        Axis::DriveOverGamma,
        Axis::OmegaFb,
        Axis::GammaOverG,
        Axis::KappaOverG,
        Axis::Eta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::DriveOverGamma => "Omega_over_Gamma",
            Axis::OmegaFb => "omega_fb",
            Axis::GammaOverG => "gamma_over_g",
            Axis::KappaOverG => "kappa_over_g",
            Axis::Eta => "eta",
        }
    }

    /// Evaluation order when two axes are combined: `Ω/Γ` is resolved last
    /// so it sees the point's `κ`.
    fn rank(self) -> u8 {
        match self {
            Axis::DriveOverGamma => 1,
            _ => 0,
        }
    }

    fn apply(self, p: &mut SystemParams, s: &mut FeedbackStrategy, v: f64) {
        match self {
            Axis::DriveOverGamma => p.drive = v * p.collective_rate(),
            Axis::OmegaFb => {
                p.omega_fb = v;
                s.omega_fb = v;
            }
            Axis::GammaOverG => {
                p.gamma = v * p.g;
                p.gamma_prime = v * p.g;
            }
            Axis::KappaOverG => p.kappa = v * p.g,
            Axis::Eta => {
                p.eta = v;
                s.eta = v;
            }
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "sweep axis",
                name: s.to_string(),
                known: Axis::ALL.map(Axis::name).join(", "),
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxis {
    pub axis: Axis,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(axis: Axis, values: Vec<f64>) -> Self {
        Self { axis, values }
    }

    /// `n` evenly spaced values from `lo` to `hi` inclusive.
    pub fn linspace(axis: Axis, lo: f64, hi: f64, n: usize) -> Self {
        let values = match n {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        };
        Self { axis, values }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SweepMode {
    /// Unique steady state via the Liouvillian kernel.
    Steady,
    /// State at time `t` (absolute units) from `|111⟩`.
    FiniteTime(f64),
}

/// Which model a sweep point is built with, and how it is run.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    pub model: String,
    pub mode: SweepMode,
    /// Worker cap; results do not depend on it.
    pub threads: usize,
    /// Output grid for finite-time points.
    pub n_points: usize,
    /// Axis values applied at every point together with the swept ones.
    pub pinned: Vec<(Axis, f64)>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            model: "effective".into(),
            mode: SweepMode::Steady,
            threads: 1,
            n_points: 2,
            pinned: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointFailure {
    pub ix: usize,
    pub iy: usize,
    pub error: Error,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub x_name: String,
    pub y_name: String,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// `fidelities[ix][iy]`; failed points are NaN.
    pub fidelities: Vec<Vec<f64>>,
    pub failures: Vec<PointFailure>,
}

impl SweepGrid {
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.fidelities[ix][iy]
    }

    /// Smallest and largest finite fidelity, if any point succeeded.
    pub fn extremes(&self) -> Option<(f64, f64)> {
        let mut it = self.fidelities.iter().flatten().copied().filter(|f| f.is_finite());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), f| (lo.min(f), hi.max(f))))
    }
}

fn point(
    base: &SystemParams,
    strategy: &FeedbackStrategy,
    axes: [(Axis, f64); 2],
    opts: &SweepOptions,
) -> Result<f64> {
    let mut p = base.clone();
    let mut s = *strategy;
    let mut axes: Vec<(Axis, f64)> = axes.into_iter().chain(opts.pinned.iter().copied()).collect();
    axes.sort_by_key(|(a, _)| a.rank());
    for (a, v) in axes {
        a.apply(&mut p, &mut s, v);
    }
    let builder = model_registry().create(&opts.model, &())?;
    let gen = builder.build(&p, &s)?;
    let target = singlet_state();
    match opts.mode {
        SweepMode::Steady => {
            let rho = steady_state(&gen)?;
            fidelity(&target, &super::partial_trace(&rho, gen.atom_dim())?)
        }
        SweepMode::FiniteTime(t) => {
            let rho0 = product_state([1, 1, 1], builder.mode_dim(&p));
            let eo = EvolveOptions::default().with_points(opts.n_points.max(2));
            Ok(evolve(&gen, &rho0, t, &eo)?.final_fidelity())
        }
    }
}

/// Fidelity to `|S3⟩` over the grid `x × y`. Points run in parallel on at
/// most `opts.threads` workers and are placed by index; a failing point is
/// recorded as NaN plus an entry in `failures`.
pub fn sweep_fidelity_2d(
    base: &SystemParams,
    strategy: &FeedbackStrategy,
    x: &SweepAxis,
    y: &SweepAxis,
    opts: &SweepOptions,
) -> Result<SweepGrid> {
    if x.values.is_empty() || y.values.is_empty() {
        return Err(Error::InvalidParam {
            name: "grid",
            reason: "sweep axes must be non-empty".into(),
        });
    }
    if x.axis == y.axis {
        return Err(Error::InvalidParam {
            name: "grid",
            reason: format!("both axes are {}", x.axis),
        });
    }
    if let SweepMode::FiniteTime(t) = opts.mode {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParam {
                name: "t",
                reason: format!("finite-time horizon must be > 0, got {t}"),
            });
        }
    }
    model_registry().create(&opts.model, &())?;
    let (nx, ny) = (x.values.len(), y.values.len());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| Error::Backend(e.to_string()))?;
    let results: Vec<Result<f64>> = pool.install(|| {
        (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let (ix, iy) = (k / ny, k % ny);
                point(base, strategy, [(x.axis, x.values[ix]), (y.axis, y.values[iy])], opts)
            })
            .collect()
    });
    let mut fidelities = vec![vec![f64::NAN; ny]; nx];
    let mut failures = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        let (ix, iy) = (k / ny, k % ny);
        match r {
            Ok(f) => fidelities[ix][iy] = f,
            Err(error) => failures.push(PointFailure { ix, iy, error }),
        }
    }
    Ok(SweepGrid {
        x_name: x.axis.name().into(),
        y_name: y.axis.name().into(),
        x_values: x.values.clone(),
        y_values: y.values.clone(),
        fidelities,
        failures,
    })
}

/// Steady-state fidelity with spontaneous emission over `γ/g × κ/g`, at the
/// reference binding `G = 0.1g`, `Δ = 200g`, `Ω = 0.5Γ` at every point and
/// `γ′ = γ`. Other fields of `base` are kept.
pub fn decoherence_contour(
    base: &SystemParams,
    strategy: &FeedbackStrategy,
    gamma_over_g: &[f64],
    kappa_over_g: &[f64],
    threads: usize,
) -> Result<SweepGrid> {
    let p = SystemParams {
        coupling: 0.1 * base.g,
        raw: None,
        ..base.clone()
    }
    .with_detuning(200.0 * base.g);
    let opts = SweepOptions {
        threads,
        pinned: vec![(Axis::DriveOverGamma, 0.5)],
        ..SweepOptions::default()
    };
    sweep_fidelity_2d(
        &p,
        strategy,
        &SweepAxis::new(Axis::GammaOverG, gamma_over_g.to_vec()),
        &SweepAxis::new(Axis::KappaOverG, kappa_over_g.to_vec()),
        &opts,
    )
}

/// First grid time at which the fidelity reaches `threshold`, or `+∞`.
pub fn convergence_time(result: &EvolutionResult, threshold: f64) -> f64 {
    result
        .times
        .iter()
        .zip(&result.fidelities)
        .find(|(_, f)| **f >= threshold)
        .map_or(f64::INFINITY, |(t, _)| *t)
}
