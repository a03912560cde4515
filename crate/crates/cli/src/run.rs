use singlet_core::analysis::{
    compare_full_vs_effective, decoherence_contour, fidelity, partial_trace, purity, state_fidelity,
    sweep_fidelity_2d, CompareOptions, SweepMode, SweepOptions,
};
use singlet_core::dynamics::{
    appendix_oracle, evolve, oscillation_frequency, residual, run_trajectories, steady_registry, EvolveOptions,
    LambdaSystem, SteadyOptions,
};
use singlet_core::model::{
    basis_state, build_cavity_me, build_feedback_me, model_registry, product_state, singlet_state, ATOM_DIM,
};
use singlet_core::opalg::min_eigenvalue;

use crate::config::{Mode, OracleKind, RunConfig, SweepKind};
use crate::error::{CliError, ErrorCode};
use crate::output::{evolution_csv, num, sweep_csv, Csv};

/// Result of one invocation: CSV text, a one-line summary for stdout and
/// non-fatal warnings for stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub csv: String,
    pub summary: String,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new(csv: String, summary: String) -> Self {
        Self {
            csv,
            summary,
            warnings: Vec::new(),
        }
    }
}

/// Largest Liouvillian dimension handled by the SVD kernel solver by default.
const NULLSPACE_MAX_DIM: usize = 27;

/// Executes `cfg` in its mode with at most `threads` workers.
pub fn run(cfg: &RunConfig, threads: usize) -> Result<Outcome, CliError> {
    let mode = cfg
        .mode
        .ok_or_else(|| CliError::new(ErrorCode::Parse, "missing required keys: mode"))?;
    match mode {
        Mode::Steady => steady(cfg),
        Mode::Evolve => evolution(cfg),
        Mode::Sweep => sweep(cfg, threads),
        Mode::Traj => trajectories(cfg, threads),
        Mode::Oracle => oracle(cfg),
    }
}

fn steady(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let gen = model_registry().create(&cfg.model, &())?.build(&cfg.params, &cfg.strategy)?;
    let solver = match &cfg.solver {
        Some(s) => s.clone(),
        None if gen.dim() <= NULLSPACE_MAX_DIM => "nullspace".into(),
        None => "direct".into(),
    };
    let rho = steady_registry().create(&solver, &SteadyOptions::default())?.solve(&gen)?;
    let reduced = partial_trace(&rho, gen.atom_dim())?;
    let f = fidelity(&singlet_state(), &reduced)?;
    let mut csv = Csv::new(&["quantity", "value"]);
    csv.labelled("fidelity", f);
    csv.labelled("trace", rho.trace().re);
    csv.labelled("purity", purity(&rho));
    csv.labelled("min_eigenvalue", min_eigenvalue(&rho)?);
    csv.labelled("residual", residual(&gen, &rho));
    Ok(Outcome::new(csv.finish(), format!("F_ss={}", num(f))))
}

fn evolution(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let builder = model_registry().create(&cfg.model, &())?;
    let gen = builder.build(&cfg.params, &cfg.strategy)?;
    let rho0 = product_state([1, 1, 1], builder.mode_dim(&cfg.params));
    let opts = EvolveOptions {
        tolerances: cfg.tolerances,
        ..EvolveOptions::default()
            .with_points(cfg.n_points)
            .with_propagator(&cfg.propagator)
    };
    let r = evolve(&gen, &rho0, cfg.t_end, &opts)?;
    let summary = format!(
        "F_final={} t={} trace_drift={} min_eigenvalue={}",
        num(r.final_fidelity()),
        num(cfg.t_end),
        num(r.max_trace_drift()),
        num(r.min_eigenvalue())
    );
    Ok(Outcome::new(evolution_csv(&r), summary))
}

fn sweep(cfg: &RunConfig, threads: usize) -> Result<Outcome, CliError> {
    let spec = cfg.sweep_spec()?;
    let grid = match spec.kind {
        SweepKind::Contour => decoherence_contour(
            &cfg.params,
            &cfg.strategy,
            &spec.x.values,
            &spec.y.values,
            threads,
        )?,
        kind => {
            let opts = SweepOptions {
                model: cfg.model.clone(),
                mode: match kind {
                    SweepKind::FiniteTime => SweepMode::FiniteTime(spec.t),
                    _ => SweepMode::Steady,
                },
                threads,
                n_points: 2,
                pinned: Vec::new(),
            };
            sweep_fidelity_2d(&cfg.params, &cfg.strategy, &spec.x, &spec.y, &opts)?
        }
    };
    let summary = match grid.extremes() {
        Some((lo, hi)) => format!("F_min={} F_max={} failed={}", num(lo), num(hi), grid.failures.len()),
        None => format!("F_min=NaN F_max=NaN failed={}", grid.failures.len()),
    };
    let warnings = grid
        .failures
        .iter()
        .map(|f| {
            format!(
                "WARN {} {}={} {}={}: {}",
                CliError::from(f.error.clone()).code,
                grid.x_name,
                num(grid.x_values[f.ix]),
                grid.y_name,
                num(grid.y_values[f.iy]),
                f.error
            )
        })
        .collect();
    Ok(Outcome {
        csv: sweep_csv(&grid),
        summary,
        warnings,
    })
}

fn trajectories(cfg: &RunConfig, threads: usize) -> Result<Outcome, CliError> {
    if cfg.model != "effective" {
        return Err(CliError::range("model", format!("`{}`: trajectories need the effective model", cfg.model)));
    }
    let e = run_trajectories(
        &cfg.params,
        &cfg.strategy,
        &basis_state([1, 1, 1]),
        cfg.t_end,
        cfg.n_points,
        cfg.n_traj,
        cfg.seed,
        threads,
    )?;
    let mut csv = Csv::new(&["t", "fidelity"]);
    for (t, f) in e.times.iter().zip(&e.mean_fidelity) {
        csv.row(&[*t, *f]);
    }
    let jumps: u64 = e.jump_counts.iter().sum();
    let summary = format!(
        "F_final={} n_traj={} mean_jumps={}",
        num(*e.mean_fidelity.last().expect("grid has two points")),
        e.n_traj,
        num(jumps as f64 / e.n_traj as f64)
    );
    Ok(Outcome::new(csv.finish(), summary))
}

fn oracle(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.oracle.kind {
        OracleKind::Appendix => {
            let o = &cfg.oracle;
            let sys = LambdaSystem {
                lambda_a: o.lambda_a,
                lambda_b: o.lambda_b,
                gamma1: o.gamma1,
                gamma2: o.gamma2,
                detuning: o.detuning,
            };
            let r = appendix_oracle(&sys, cfg.t_end, cfg.n_points)?;
            let mut csv = Csv::new(&["t", "p0_full", "p1_full", "p0_effective", "p1_effective"]);
            for i in 0..r.full.times.len() {
                csv.row(&[
                    r.full.times[i],
                    r.full.observables[0][i],
                    r.full.observables[1][i],
                    r.effective.observables[0][i],
                    r.effective.observables[1][i],
                ]);
            }
            let fit = oscillation_frequency(&r.full.times, &r.full.observables[1]).unwrap_or(f64::NAN);
            let summary = format!(
                "max_deviation={} omega_fit={} omega_expected={}",
                num(r.max_deviation),
                num(fit),
                num(sys.raman_frequency())
            );
            Ok(Outcome::new(csv.finish(), summary))
        }
        OracleKind::Cavity => {
            let eff = steady_registry()
                .create("nullspace", &SteadyOptions::default())?
                .solve(&build_feedback_me(&cfg.params, &cfg.strategy)?)?;
            let cav = steady_registry()
                .create("direct", &SteadyOptions::default())?
                .solve(&build_cavity_me(&cfg.params, &cfg.strategy)?)?;
            let reduced = partial_trace(&cav, ATOM_DIM)?;
            let overlap = state_fidelity(&reduced, &eff)?;
            let mut csv = Csv::new(&["quantity", "value"]);
            csv.labelled("state_fidelity", overlap);
            csv.labelled("fidelity_cavity", fidelity(&singlet_state(), &reduced)?);
            csv.labelled("fidelity_effective", fidelity(&singlet_state(), &eff)?);
            Ok(Outcome::new(csv.finish(), format!("F_uhlmann={}", num(overlap))))
        }
        OracleKind::Full => {
            let opts = CompareOptions {
                n_points: cfg.n_points,
                ..CompareOptions::default()
            };
            let c = compare_full_vs_effective(&cfg.params, &cfg.strategy, cfg.t_end, &opts)?;
            let mut csv = Csv::new(&["t", "fidelity_full", "fidelity_effective"]);
            for i in 0..c.times.len() {
                csv.row(&[c.times[i], c.full[i], c.effective[i]]);
            }
            let summary = format!(
                "max_gap={} F_full={} F_effective={}",
                num(c.max_gap),
                num(*c.full.last().expect("grid")),
                num(*c.effective.last().expect("grid"))
            );
            Ok(Outcome::new(csv.finish(), summary))
        }
    }
}
