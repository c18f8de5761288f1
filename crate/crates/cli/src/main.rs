use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ancilla_tomography::experiments::{
    builtin_claims, builtin_scenario, emit, find_entanglement_zeros, load_scenario, reconstruct_at, scan,
    scenario_claims, Format, Scenario,
};
use ancilla_tomography::Error;
use clap::{Parser, Subcommand};

/// Scans, entanglement zeros, claim checks and state reconstruction for
/// ancilla-assisted single-observable tomography.
#[derive(Parser)]
#[command(name = "ancilla-tomo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy, EoF, Δ, dΔ/dt and cond(Ω) over the time grid.
    Scan {
        /// Scenario file, or `builtin:fig1` / `builtin:fig2`.
        cfg: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Refined times at which a pure trajectory is a product state.
    Zeros {
        cfg: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        interval: Option<Vec<f64>>,
    },
    /// Checks the built-in claims, or those applicable to one scenario.
    Claims {
        #[arg(long, default_value = "builtin")]
        scenario: String,
    },
    /// Recovers the initial system state from simulated measurements at `t`.
    Reconstruct {
        cfg: String,
        #[arg(long)]
        t: f64,
    },
}

enum Failure {
    Error(Error),
    Claims,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SingularMatrix(_) => 3,
        Error::Io(_) => 4,
        _ => 1,
    }
}

fn load(cfg: &str) -> Result<Scenario, Error> {
    match cfg.strip_prefix("builtin:") {
        Some(name) => builtin_scenario(name),
        None => load_scenario(Path::new(cfg)),
    }
}

fn log_overrides(s: &Scenario) {
    for (k, v) in &s.config.tolerances {
        eprintln!("# tolerance {k} = {v:e}");
    }
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Scan { cfg, out, format } => {
            let format: Format = format.parse()?;
            let s = load(&cfg)?;
            if format == Format::Json {
                log_overrides(&s);
            }
            let records = scan(&s)?;
            emit(&records, format, out.as_deref(), &s.config.tolerances)?;
        }
        Command::Zeros { cfg, interval } => {
            let s = load(&cfg)?;
            log_overrides(&s);
            let interval = interval.map(|v| (v[0], v[1]));
            print_json(&find_entanglement_zeros(&s, interval)?);
        }
        Command::Claims { scenario } => {
            let report = if scenario == "builtin" {
                builtin_claims()?
            } else {
                let s = load(&scenario)?;
                log_overrides(&s);
                scenario_claims(&s)?
            };
            print_json(&report);
            if !report.passed {
                for c in report.claims.iter().filter(|c| !c.passed) {
                    eprintln!("claim {} failed: {:?}", c.id, c.measured);
                }
                return Err(Failure::Claims);
            }
        }
        Command::Reconstruct { cfg, t } => {
            let s = load(&cfg)?;
            log_overrides(&s);
            print_json(&reconstruct_at(&s, t)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(2),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
