//! Line-based `key = value` run configuration.
//!
//! `#` starts a comment. Reals are plain decimals; angle-valued keys also
//! accept a `pi` suffix (`0.3pi`). Keys are case-sensitive.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use singlet_core::analysis::{Axis, SweepAxis};
use singlet_core::dynamics::{propagator_registry, steady_registry, Tolerances};
use singlet_core::model::{model_registry, FeedbackKind, FeedbackStrategy, RawDrives, SystemParams};

use crate::error::{CliError, ErrorCode};

pub const REQUIRED_KEYS: [&str; 4] = ["model", "strategy", "omega_fb", "Omega_over_Gamma"];

const RAW_KEYS: [&str; 7] = [
    "lambda_a", "lambda_b", "Omega_a1", "Omega_a2", "Omega_a3", "Omega_b", "Omega_c",
];

const OPTIONAL_KEYS: [&str; 42] = [
    "mode",
    "output",
    "seed",
    "g",
    "detuning",
    "hopping",
    "coupling",
    "kappa",
    "gamma",
    "gamma_prime",
    "eta",
    "n_max",
    "lambda_a",
    "lambda_b",
    "Omega_a1",
    "Omega_a2",
    "Omega_a3",
    "Omega_b",
    "Omega_c",
    "t_end",
    "n_points",
    "propagator",
    "rtol",
    "atol",
    "solver",
    "sweep_mode",
    "sweep_t",
    "x_axis",
    "x_min",
    "x_max",
    "x_n",
    "y_axis",
    "y_min",
    "y_max",
    "y_n",
    "n_traj",
    "oracle",
    "oracle_lambda_a",
    "oracle_lambda_b",
    "oracle_gamma1",
    "oracle_gamma2",
    "oracle_detuning",
];

const ANGLE_KEYS: [&str; 5] = ["omega_fb", "x_min", "x_max", "y_min", "y_max"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Steady,
    Evolve,
    Sweep,
    Traj,
    Oracle,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::Steady, Mode::Evolve, Mode::Sweep, Mode::Traj, Mode::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Steady => "steady",
            Mode::Evolve => "evolve",
            Mode::Sweep => "sweep",
            Mode::Traj => "traj",
            Mode::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}` (known: steady, evolve, sweep, traj, oracle)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    Steady,
    FiniteTime,
    /// `γ/g × κ/g` at the reference emission binding.
    Contour,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    /// Horizon for finite-time points.
    pub t: f64,
    pub x: SweepAxis,
    pub y: SweepAxis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    /// Λ system against its eliminated two-level model.
    Appendix,
    /// Cavity-model steady state against the effective model.
    Cavity,
    /// Three-mode model against the effective model over time.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleSpec {
    pub kind: OracleKind,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub detuning: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: String,
    pub strategy: FeedbackStrategy,
    pub params: SystemParams,
    pub drive_over_gamma: f64,
    /// Set by the config or by the subcommand.
    pub mode: Option<Mode>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub t_end: f64,
    pub n_points: usize,
    pub propagator: String,
    pub tolerances: Tolerances,
    /// Steady-state solver; picked by dimension when absent.
    pub solver: Option<String>,
    pub sweep: Result<SweepSpec, Vec<&'static str>>,
    pub n_traj: usize,
    pub oracle: OracleSpec,
}

impl RunConfig {
    /// Sweep settings, or `E_PARSE` naming the missing sweep keys.
    pub fn sweep_spec(&self) -> Result<&SweepSpec, CliError> {
        self.sweep.as_ref().map_err(|missing| {
            CliError::new(
                ErrorCode::Parse,
                format!("missing required keys for sweep: {}", missing.join(", ")),
            )
        })
    }
}

struct Entry {
    line: usize,
    value: String,
}

struct Table {
    entries: BTreeMap<String, Entry>,
}

fn parse_real(key: &str, line: usize, value: &str) -> Result<f64, CliError> {
    let (body, scale) = match value.strip_suffix("pi") {
        Some(b) if ANGLE_KEYS.contains(&key) => (b.trim(), PI),
        _ => (value, 1.0),
    };
    // a bare `pi` means one half-turn
    let x = if body.is_empty() && scale == PI {
        1.0
    } else {
        body.parse::<f64>()
            .map_err(|_| CliError::parse(line, format!("{key}: expected a decimal real, got `{value}`")))?
    };
    if !x.is_finite() {
        return Err(CliError::range(key, format!("must be finite, got `{value}`")));
    }
    Ok(x * scale)
}

impl Table {
    fn real(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.entries
            .get(key)
            .map(|e| parse_real(key, e.line, &e.value))
            .transpose()
    }

    fn real_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.real(key)?.unwrap_or(default))
    }

    fn uint(&self, key: &str) -> Result<Option<u64>, CliError> {
        self.entries
            .get(key)
            .map(|e| {
                e.value
                    .parse::<u64>()
                    .map_err(|_| CliError::parse(e.line, format!("{key}: expected a non-negative integer, got `{}`", e.value)))
            })
            .transpose()
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }
}

fn tokenize(text: &str) -> Result<Table, CliError> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::parse(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(CliError::parse(line, format!("expected `key = value`, got `{content}`")));
        }
        if !REQUIRED_KEYS.contains(&key) && !OPTIONAL_KEYS.contains(&key) {
            return Err(CliError::new(ErrorCode::UnknownKey, format!("{key} (line {line})")));
        }
        if let Some(prev) = entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        ) {
            return Err(CliError::parse(line, format!("duplicate key {key} (first on line {})", prev.line)));
        }
    }
    Ok(Table { entries })
}

fn check_nonneg(key: &str, v: f64) -> Result<f64, CliError> {
    if v < 0.0 {
        return Err(CliError::range(key, format!("{v} outside [0, inf)")));
    }
    Ok(v)
}

fn check_positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v <= 0.0 {
        return Err(CliError::range(key, format!("{v} outside (0, inf)")));
    }
    Ok(v)
}

fn named(key: &str, value: &str, known: &[&str]) -> Result<String, CliError> {
    if known.contains(&value) {
        Ok(value.to_string())
    } else {
        Err(CliError::range(key, format!("`{value}` not one of {}", known.join(", "))))
    }
}

fn params(t: &Table, model: &str) -> Result<(SystemParams, f64), CliError> {
    let mut p = SystemParams {
        n_max: if model == "cavity" { 2 } else { 1 },
        ..SystemParams::default()
    };
    p.g = check_positive("g", t.real_or("g", p.g)?)?;
    if let Some(d) = t.real("detuning")? {
        p = p.with_detuning(d);
    }
    if let Some(j) = t.real("hopping")? {
        p.hopping = j;
    }
    p.coupling = check_nonneg("coupling", t.real_or("coupling", p.coupling)?)?;
    p.kappa = check_positive("kappa", t.real_or("kappa", p.kappa)?)?;
    p.gamma = check_nonneg("gamma", t.real_or("gamma", p.gamma)?)?;
    p.gamma_prime = check_nonneg("gamma_prime", t.real_or("gamma_prime", p.gamma)?)?;
    p.eta = t.real_or("eta", 1.0)?;
    if !(0.0..=1.0).contains(&p.eta) {
        return Err(CliError::range("eta", format!("{} outside [0, 1]", p.eta)));
    }
    if let Some(n) = t.uint("n_max")? {
        if n < 1 {
            return Err(CliError::range("n_max", format!("{n} outside [1, inf)")));
        }
        p.n_max = n as usize;
    }
    let ratio = t.real("Omega_over_Gamma")?.expect("required key checked");
    check_nonneg("Omega_over_Gamma", ratio)?;
    p = p.with_drive_over_gamma(ratio);
    p.omega_fb = t.real("omega_fb")?.expect("required key checked");
    p.raw = raw_drives(t)?;
    p.validate()?;
    Ok((p, ratio))
}

/// Raw amplitudes come as a complete group or not at all.
fn raw_drives(t: &Table) -> Result<Option<RawDrives>, CliError> {
    let given: Vec<&str> = RAW_KEYS.iter().copied().filter(|k| t.entries.contains_key(*k)).collect();
    if given.is_empty() {
        return Ok(None);
    }
    let missing: Vec<&str> = RAW_KEYS.iter().copied().filter(|k| !given.contains(k)).collect();
    if !missing.is_empty() {
        return Err(CliError::parse(
            t.line(given[0]),
            format!("raw drive amplitudes need all of {}; missing {}", RAW_KEYS.join(", "), missing.join(", ")),
        ));
    }
    let v = |k: &str| -> Result<f64, CliError> { check_nonneg(k, t.real(k)?.expect("present")) };
    Ok(Some(RawDrives {
        lambda_a: v("lambda_a")?,
        lambda_b: v("lambda_b")?,
        omega_a: [v("Omega_a1")?, v("Omega_a2")?, v("Omega_a3")?],
        omega_b: v("Omega_b")?,
        omega_c: v("Omega_c")?,
    }))
}

fn axis(t: &Table, prefix: &str) -> Result<Result<SweepAxis, Vec<&'static str>>, CliError> {
    let keys: [&'static str; 4] = match prefix {
        "x" => ["x_axis", "x_min", "x_max", "x_n"],
        _ => ["y_axis", "y_min", "y_max", "y_n"],
    };
    let missing: Vec<&'static str> = keys.iter().copied().filter(|k| !t.entries.contains_key(*k)).collect();
    if !missing.is_empty() {
        return Ok(Err(missing));
    }
    let name = t.text(keys[0]).expect("present");
    let kind: Axis = name
        .parse()
        .map_err(|e: singlet_core::Error| CliError::range(keys[0], e.to_string()))?;
    let lo = t.real(keys[1])?.expect("present");
    let hi = t.real(keys[2])?.expect("present");
    let n = t.uint(keys[3])?.expect("present");
    if n < 1 {
        return Err(CliError::range(keys[3], format!("{n} outside [1, inf)")));
    }
    if hi < lo {
        return Err(CliError::range(keys[2], format!("{hi} below {} = {lo}", keys[1])));
    }
    Ok(Ok(SweepAxis::linspace(kind, lo, hi, n as usize)))
}

fn sweep(t: &Table) -> Result<Result<SweepSpec, Vec<&'static str>>, CliError> {
    let x = axis(t, "x")?;
    let y = axis(t, "y")?;
    let (x, y) = match (x, y) {
        (Ok(x), Ok(y)) => (x, y),
        (x, y) => {
            let mut missing = x.err().unwrap_or_default();
            missing.extend(y.err().unwrap_or_default());
            return Ok(Err(missing));
        }
    };
    let kind = match t.text("sweep_mode").unwrap_or("steady") {
        "steady" => SweepKind::Steady,
        "finite_time" => SweepKind::FiniteTime,
        "contour" => SweepKind::Contour,
        other => {
            return Err(CliError::range(
                "sweep_mode",
                format!("`{other}` not one of steady, finite_time, contour"),
            ))
        }
    };
    if x.axis == y.axis {
        return Err(CliError::range("y_axis", format!("same as x_axis ({})", x.axis)));
    }
    if kind == SweepKind::Contour && (x.axis != Axis::GammaOverG || y.axis != Axis::KappaOverG) {
        return Err(CliError::range(
            "sweep_mode",
            "contour needs x_axis = gamma_over_g and y_axis = kappa_over_g",
        ));
    }
    let t_sweep = check_positive("sweep_t", t.real_or("sweep_t", 1500.0)?)?;
    Ok(Ok(SweepSpec { kind, t: t_sweep, x, y }))
}

fn oracle(t: &Table) -> Result<OracleSpec, CliError> {
    let kind = match t.text("oracle").unwrap_or("appendix") {
        "appendix" => OracleKind::Appendix,
        "cavity" => OracleKind::Cavity,
        "full" => OracleKind::Full,
        other => return Err(CliError::range("oracle", format!("`{other}` not one of appendix, cavity, full"))),
    };
    let spec = OracleSpec {
        kind,
        lambda_a: check_nonneg("oracle_lambda_a", t.real_or("oracle_lambda_a", 1.0)?)?,
        lambda_b: check_nonneg("oracle_lambda_b", t.real_or("oracle_lambda_b", 1.0)?)?,
        gamma1: check_nonneg("oracle_gamma1", t.real_or("oracle_gamma1", 0.5)?)?,
        gamma2: check_nonneg("oracle_gamma2", t.real_or("oracle_gamma2", 0.5)?)?,
        detuning: t.real_or("oracle_detuning", 100.0)?,
    };
    if spec.detuning == 0.0 {
        return Err(CliError::range("oracle_detuning", "must be non-zero"));
    }
    Ok(spec)
}

/// Parses and validates a configuration. Missing required keys are all
/// reported at once.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let t = tokenize(text)?;
    let missing: Vec<&str> = REQUIRED_KEYS.iter().copied().filter(|k| !t.entries.contains_key(*k)).collect();
    if !missing.is_empty() {
        return Err(CliError::new(
            ErrorCode::Parse,
            format!("missing required keys: {}", missing.join(", ")),
        ));
    }
    let model = named("model", t.text("model").expect("required"), &model_registry().names())?;
    let kind: FeedbackKind = t
        .text("strategy")
        .expect("required")
        .parse()
        .map_err(|e: singlet_core::Error| CliError::range("strategy", e.to_string()))?;
    let (params, drive_over_gamma) = params(&t, &model)?;
    let strategy = FeedbackStrategy::new(kind, params.omega_fb, params.eta)?;

    let mode = t
        .text("mode")
        .map(|m| m.parse::<Mode>().map_err(|e| CliError::range("mode", e)))
        .transpose()?;
    let n_points = t.uint("n_points")?.unwrap_or(151);
    if n_points < 2 {
        return Err(CliError::range("n_points", format!("{n_points} outside [2, inf)")));
    }
    let n_traj = t.uint("n_traj")?.unwrap_or(500);
    if n_traj < 1 {
        return Err(CliError::range("n_traj", format!("{n_traj} outside [1, inf)")));
    }
    let tolerances = Tolerances {
        rtol: check_positive("rtol", t.real_or("rtol", Tolerances::default().rtol)?)?,
        atol: check_positive("atol", t.real_or("atol", Tolerances::default().atol)?)?,
    };
    let propagator = named(
        "propagator",
        t.text("propagator").unwrap_or("dopri5"),
        &propagator_registry().names(),
    )?;
    let solver = t
        .text("solver")
        .map(|s| named("solver", s, &steady_registry().names()))
        .transpose()?;

    Ok(RunConfig {
        model,
        strategy,
        params,
        drive_over_gamma,
        mode,
        output: t.text("output").map(PathBuf::from),
        seed: t.uint("seed")?.unwrap_or(0),
        t_end: check_positive("t_end", t.real_or("t_end", 1500.0)?)?,
        n_points: n_points as usize,
        propagator,
        tolerances,
        solver,
        sweep: sweep(&t)?,
        n_traj: n_traj as usize,
        oracle: oracle(&t)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use singlet_core::model::FeedbackKind;

    const MINIMAL: &str = "model = effective\nstrategy = nonlocal\nomega_fb = 0.9424777960769379\nOmega_over_Gamma = 0.5\n";

    fn with(extra: &str) -> String {
        format!("{MINIMAL}{extra}")
    }

    #[test]
    fn minimal_config() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.model, "effective");
        assert_eq!(cfg.strategy.kind, FeedbackKind::Nonlocal);
        assert!((cfg.strategy.omega_fb - 0.3 * PI).abs() < 1e-15);
        assert_eq!(cfg.params.drive, 0.5);
        assert_eq!(cfg.strategy.eta, 1.0);
        assert_eq!(cfg.mode, None);
        assert_eq!(cfg.sweep_spec().unwrap_err().code, ErrorCode::Parse);
    }

    #[test]
    fn pi_suffix_and_comments() {
        let text = "# header\nmodel = effective   # trailing\nstrategy = local\nomega_fb = 0.5pi\n\nOmega_over_Gamma = 1\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.strategy.omega_fb, 0.5 * PI);
        assert_eq!(parse_config(&MINIMAL.replace("0.9424777960769379", "pi")).unwrap().strategy.omega_fb, PI);
        // only angles take the suffix
        let e = parse_config(&with("kappa = 2pi\n")).unwrap_err();
        assert_eq!(e.code, ErrorCode::Parse);
        assert!(e.detail.starts_with("line 5"), "{}", e.detail);
    }

    #[test]
    fn empty_file_lists_all_missing_keys() {
        let e = parse_config("").unwrap_err();
        assert_eq!(e.code, ErrorCode::Parse);
        assert_eq!(e.detail, "missing required keys: model, strategy, omega_fb, Omega_over_Gamma");
        let e = parse_config("model = full\n").unwrap_err();
        assert_eq!(e.detail, "missing required keys: strategy, omega_fb, Omega_over_Gamma");
    }

    #[test]
    fn efficiency_out_of_range() {
        let e = parse_config(&with("eta = 1.5\n")).unwrap_err();
        assert_eq!(e.code, ErrorCode::Range);
        assert_eq!(e.detail, "eta 1.5 outside [0, 1]");
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let e = parse_config(&with("kappa 2\n")).unwrap_err();
        assert_eq!((e.code, e.detail.as_str()), (ErrorCode::Parse, "line 5: expected `key = value`, got `kappa 2`"));
        let e = parse_config(&with("kappa = fast\n")).unwrap_err();
        assert!(e.detail.starts_with("line 5: kappa"));
        let e = parse_config(&with("kappa = 2\nkappa = 3\n")).unwrap_err();
        assert!(e.detail.contains("duplicate key kappa"));
        let e = parse_config(&with("n_max = 1.5\n")).unwrap_err();
        assert_eq!(e.code, ErrorCode::Parse);
    }

    #[test]
    fn unknown_keys_and_names() {
        let e = parse_config(&with("temperature = 3\n")).unwrap_err();
        assert_eq!((e.code, e.detail.as_str()), (ErrorCode::UnknownKey, "temperature (line 5)"));
        assert_eq!(parse_config(&MINIMAL.replace("effective", "exact")).unwrap_err().code, ErrorCode::Range);
        assert_eq!(parse_config(&MINIMAL.replace("nonlocal", "global")).unwrap_err().code, ErrorCode::Range);
        assert_eq!(parse_config(&with("propagator = euler\n")).unwrap_err().code, ErrorCode::Range);
        assert_eq!(parse_config(&with("mode = fit\n")).unwrap_err().code, ErrorCode::Range);
    }

    #[test]
    fn non_finite_and_negative_values() {
        assert_eq!(parse_config(&with("kappa = inf\n")).unwrap_err().code, ErrorCode::Range);
        assert_eq!(parse_config(&with("kappa = 0\n")).unwrap_err().code, ErrorCode::Range);
        assert_eq!(parse_config(&with("gamma = -1e-3\n")).unwrap_err().code, ErrorCode::Range);
        assert_eq!(parse_config(&with("n_max = 0\n")).unwrap_err().code, ErrorCode::Range);
        assert_eq!(parse_config(&with("n_points = 1\n")).unwrap_err().code, ErrorCode::Range);
    }

    #[test]
    fn detuning_sets_resonant_hopping_and_drive_follows_kappa() {
        let cfg = parse_config(&with("detuning = 20\nkappa = 5\n")).unwrap();
        assert!((cfg.params.hopping - 20.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((cfg.params.drive - 0.5 * 0.2).abs() < 1e-15);
        let cfg = parse_config(&with("detuning = 20\nhopping = 3\n")).unwrap();
        assert_eq!(cfg.params.hopping, 3.0);
        assert_eq!(parse_config(&MINIMAL.replace("effective", "cavity")).unwrap().params.n_max, 2);
    }

    #[test]
    fn raw_drives_come_as_a_group() {
        let e = parse_config(&with("lambda_a = 1\n")).unwrap_err();
        assert_eq!(e.code, ErrorCode::Parse);
        assert!(e.detail.contains("missing lambda_b"));
        // λaλb/Δ = 100/200 = Ω and G = gΩa/Δ = 1
        let raw = "detuning = 200\nlambda_a = 10\nlambda_b = 10\nOmega_a1 = 200\nOmega_a2 = 141.4213562373095\n\
                   Omega_a3 = 200\nOmega_b = 10\nOmega_c = 10\n";
        let cfg = parse_config(&with(raw)).unwrap();
        assert_eq!(cfg.params.raw.as_ref().unwrap().omega_b, 10.0);
        let e = parse_config(&with(&raw.replace("Omega_c = 10", "Omega_c = 11"))).unwrap_err();
        assert_eq!(e.code, ErrorCode::Range);
    }

    #[test]
    fn sweep_keys() {
        let e = parse_config(&with("x_axis = omega_fb\n")).unwrap().sweep_spec().unwrap_err().clone();
        assert_eq!(
            e.detail,
            "missing required keys for sweep: x_min, x_max, x_n, y_axis, y_min, y_max, y_n"
        );
        let grid = "x_axis = omega_fb\nx_min = 0\nx_max = 1pi\nx_n = 5\ny_axis = eta\ny_min = 0.5\ny_max = 1\ny_n = 2\n";
        let cfg = parse_config(&with(grid)).unwrap();
        let s = cfg.sweep_spec().unwrap();
        assert_eq!(s.x.values, vec![0.0, 0.25 * PI, 0.5 * PI, 0.75 * PI, PI]);
        assert_eq!(s.kind, SweepKind::Steady);
        assert_eq!(parse_config(&with(&grid.replace("y_axis = eta", "y_axis = omega_fb"))).unwrap_err().code, ErrorCode::Range);
        assert_eq!(parse_config(&with(&format!("{grid}sweep_mode = contour\n"))).unwrap_err().code, ErrorCode::Range);
        assert_eq!(parse_config(&with(&grid.replace("x_max = 1pi", "x_max = -1"))).unwrap_err().code, ErrorCode::Range);
    }

    #[test]
    fn oracle_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.oracle.kind, OracleKind::Appendix);
        assert_eq!(cfg.oracle.detuning, 100.0);
        assert_eq!(parse_config(&with("oracle_detuning = 0\n")).unwrap_err().code, ErrorCode::Range);
    }
}
