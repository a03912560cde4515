use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use singlet_cli::config::{parse_config, Mode};
use singlet_cli::error::{CliError, ErrorCode};
use singlet_cli::presets;
use singlet_cli::run::run;

#[derive(Parser, Debug)]
#[command(name = "singlet", version, about = "Feedback stabilization of the three-atom singlet state")]
struct Cli {
    /// Run configuration (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV output path; overrides `output` in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker cap for sweeps and trajectory ensembles.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Base seed; overrides `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Steady state of the configured model.
    Steady,
    /// Time evolution from |111>.
    Evolve,
    /// Two-dimensional fidelity sweep.
    Sweep,
    /// Quantum-jump trajectory ensemble.
    Traj,
    /// Elimination checks (appendix, cavity, full).
    Oracle,
    /// Run a named preset.
    Figure {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(presets::NAMES))]
        name: String,
    },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if cli.threads == 0 {
        return Err(CliError::range("threads", "0 outside [1, inf)"));
    }
    let (text, mode, default_out) = match &cli.command {
        Command::Figure { name } => {
            let text = presets::preset(name).expect("value parser admits only presets");
            (text, None, PathBuf::from(format!("{name}.csv")))
        }
        other => {
            let path = cli
                .config
                .as_ref()
                .ok_or_else(|| CliError::new(ErrorCode::Usage, "--config <path> is required"))?;
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::new(ErrorCode::Io, format!("{}: {e}", path.display())))?;
            let mode = match other {
                Command::Steady => Mode::Steady,
                Command::Evolve => Mode::Evolve,
                Command::Sweep => Mode::Sweep,
                Command::Traj => Mode::Traj,
                _ => Mode::Oracle,
            };
            (text, Some(mode), PathBuf::from(format!("{mode}.csv")))
        }
    };
    let mut cfg = parse_config(&text)?;
    if mode.is_some() {
        cfg.mode = mode;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli.out.or_else(|| cfg.output.clone()).unwrap_or(default_out);
    let outcome = run(&cfg, cli.threads)?;
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    fs::write(&out, &outcome.csv).map_err(|e| CliError::new(ErrorCode::Io, format!("{}: {e}", out.display())))?;
    println!("{}", outcome.summary);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("ERROR {} {first}", ErrorCode::Usage);
            return ExitCode::from(ErrorCode::Usage.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ERROR {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
