use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use entangle_net::harness::{self, HarnessError, HarnessResult, Scenario};
use entangle_net::validate::{Suite, DEFAULT_SEED};
use entangle_net::Family;

#[derive(Parser)]
#[command(name = "entangle-net", version, about = "Entanglement dynamics of double Jaynes-Cummings networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Concurrence against time for one scenario
    Curve {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum entanglement over an angle grid
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Threshold and optimum estimates as JSON
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Long-time pair states of the multimode model
    Steady {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long = "alpha-deg", allow_negative_numbers = true)]
        alpha_deg: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run invariant suites; exits 1 if any check fails
    Validate {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Phi,
    Psi,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Unitarity,
    Voperators,
    Oracle,
    Steady,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::All => Suite::ALL.to_vec(),
            SuiteArg::Unitarity => vec![Suite::Unitarity],
            SuiteArg::Voperators => vec![Suite::Voperators],
            SuiteArg::Oracle => vec![Suite::Oracle],
            SuiteArg::Steady => vec![Suite::Steady],
        }
    }
}

fn read_config(path: &Path) -> HarnessResult<Scenario> {
    let text = fs::read_to_string(path)
        .map_err(|e| HarnessError::BadInput(format!("config: cannot read {}: {e}", path.display())))?;
    Scenario::from_json(&text)
}

fn emit(path: Option<&Path>, body: &str) -> HarnessResult<()> {
    match path {
        Some(p) => {
            fs::write(p, body).map_err(|e| HarnessError::BadInput(format!("out: cannot write {}: {e}", p.display())))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn run(cli: Cli) -> HarnessResult<()> {
    harness::configure_threads(std::env::var("ENTANGLE_NET_THREADS").ok().as_deref())?;
    match cli.command {
        Command::Curve { config, out } => {
            let csv = harness::run_curve(&read_config(&config)?)?;
            emit(out.as_deref(), &csv)
        }
        Command::Sweep { config, out, summary } => {
            let (csv, report) = harness::run_sweep(&read_config(&config)?)?;
            emit(out.as_deref(), &csv)?;
            match summary {
                Some(p) => emit(Some(&p), &to_json(&report)),
                None => {
                    eprint!("{}", to_json(&report));
                    Ok(())
                }
            }
        }
        Command::Steady { family, alpha_deg, out } => {
            let family = match family {
                FamilyArg::Phi => Family::Phi,
                FamilyArg::Psi => Family::Psi,
            };
            emit(out.as_deref(), &to_json(&harness::run_steady(family, alpha_deg)?))
        }
        Command::Validate { suite, report, seed } => {
            let rep = harness::run_validate(&suite.suites(), seed)?;
            emit(report.as_deref(), &to_json(&rep))?;
            if rep.passed {
                Ok(())
            } else {
                let failing: Vec<_> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                Err(HarnessError::Validation(failing.join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("entangle-net: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
