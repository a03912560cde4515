use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const NONLOCAL: &str = "model = effective\nstrategy = nonlocal\nomega_fb = 0.3pi\nOmega_over_Gamma = 0.5\n";

fn singlet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singlet"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_config(text: &str, args: &[&str]) -> (TempDir, Output) {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("run.cfg"), text).unwrap();
    let mut all = vec!["--config", "run.cfg"];
    all.extend_from_slice(args);
    let out = singlet(dir.path(), &all);
    (dir, out)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn steady_run_writes_csv_and_summary() {
    let (dir, out) = with_config(NONLOCAL, &["steady", "--out", "ss.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary = stdout(&out);
    let f: f64 = summary.trim().strip_prefix("F_ss=").unwrap().parse().unwrap();
    assert!(f >= 0.999, "{summary}");
    let csv = fs::read_to_string(dir.path().join("ss.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("quantity,value"));
    let labels: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(labels, ["fidelity", "trace", "purity", "min_eigenvalue", "residual"]);
}

#[test]
fn default_output_is_named_after_the_mode() {
    let (dir, out) = with_config(NONLOCAL, &["steady"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("steady.csv").exists());
}

#[test]
fn evolve_csv_has_one_row_per_grid_point() {
    let text = format!("{NONLOCAL}t_end = 20\nn_points = 11\n");
    let (dir, out) = with_config(&text, &["evolve", "--out", "e.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("F_final="));
    let csv = fs::read_to_string(dir.path().join("e.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,fidelity,trace,purity");
    assert_eq!(lines.len(), 12);
    assert!(lines[1].starts_with("0.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0"));
}

#[test]
fn parameter_out_of_range_exits_one() {
    let (_dir, out) = with_config(&format!("{NONLOCAL}eta = 1.5\n"), &["steady"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("ERROR E_RANGE eta"), "{}", stderr(&out));
}

#[test]
fn unknown_and_duplicate_keys_are_rejected() {
    let (_dir, out) = with_config(&format!("{NONLOCAL}kapa = 2\n"), &["steady"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("ERROR E_UNKNOWN_KEY kapa"), "{}", stderr(&out));

    let (_dir, out) = with_config(&format!("{NONLOCAL}kappa = 2\nkappa = 3\n"), &["steady"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("ERROR E_PARSE"), "{}", stderr(&out));
}

#[test]
fn missing_required_keys_are_listed() {
    let (_dir, out) = with_config("model = effective\n", &["steady"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("strategy") && err.contains("omega_fb") && err.contains("Omega_over_Gamma"), "{err}");
}

#[test]
fn degenerate_steady_state_exits_two() {
    let text = NONLOCAL.replace("Omega_over_Gamma = 0.5", "Omega_over_Gamma = 0");
    let (_dir, out) = with_config(&text, &["steady"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERROR E_DEGENERATE"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let out = singlet(dir.path(), &["steady"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("ERROR E_USAGE"));

    let out = singlet(dir.path(), &["figure", "fig9z"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("ERROR E_USAGE"));

    let out = singlet(dir.path(), &["--config", "absent.cfg", "steady"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("ERROR E_IO"));

    let out = singlet(dir.path(), &["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sweep"));
}

#[test]
fn sweep_reports_boundary_failures_as_warnings() {
    let text = format!(
        "{NONLOCAL}mode = sweep\nx_axis = omega_fb\nx_min = 0\nx_max = 0.5pi\nx_n = 3\n\
         y_axis = Omega_over_Gamma\ny_min = 0\ny_max = 1\ny_n = 2\n"
    );
    let (dir, out) = with_config(&text, &["sweep", "--out", "grid.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("grid.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,y,fidelity");
    assert_eq!(lines.len(), 7);
    // ω = 0 column and Ω = 0 row: four of six points have a degenerate kernel
    assert_eq!(lines.iter().filter(|l| l.ends_with(",NaN")).count(), 4);
    let warnings: Vec<String> = stderr(&out).lines().map(String::from).collect();
    assert_eq!(warnings.len(), 4);
    assert!(warnings.iter().all(|w| w.starts_with("WARN E_DEGENERATE")));
    assert!(stdout(&out).ends_with("failed=4\n"));
}

#[test]
fn trajectories_are_reproducible_and_thread_independent() {
    let text = format!("{NONLOCAL}mode = traj\nt_end = 20\nn_points = 21\nn_traj = 24\n");
    let run = |args: &[&str]| {
        let (dir, out) = with_config(&text, args);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        (fs::read(dir.path().join("traj.csv")).unwrap(), stdout(&out))
    };
    let a = run(&["traj", "--seed", "11"]);
    let b = run(&["traj", "--seed", "11", "--threads", "4"]);
    let c = run(&["traj", "--seed", "12"]);
    assert_eq!(a, b);
    assert_ne!(a.0, c.0);
    assert!(String::from_utf8(a.0).unwrap().starts_with("t,fidelity\n"));
}

#[test]
fn appendix_oracle_summary() {
    let text = format!("{NONLOCAL}mode = oracle\noracle = appendix\nt_end = 200\nn_points = 201\n");
    let (_dir, out) = with_config(&text, &["oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary = stdout(&out);
    let dev: f64 = summary.split_whitespace().next().unwrap().strip_prefix("max_deviation=").unwrap().parse().unwrap();
    assert!(dev < 0.05, "{summary}");
}

#[test]
fn presets_run_from_the_figure_subcommand() {
    let dir = TempDir::new().unwrap();
    let out = singlet(dir.path(), &["figure", "fig3a", "--out", "f.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert_eq!(csv.lines().count(), 502);
}
