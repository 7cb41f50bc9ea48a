use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use ar_braid::proofchain::Equation;
use ar_braid::rep::BetaChoice;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use commands::{Invalid, Status};

/// Build, verify and probe the three-dimensional braid group
/// representation and its restriction to the pure braid group.
#[derive(Parser, Debug)]
#[command(name = "ar-braid", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit U, V, the generator images and the entry symbols at one c.
    Matrices {
        #[command(flatten)]
        points: Points,
        #[command(flatten)]
        common: Common,
    },
    /// Check the defining relations, unitarity and closed forms.
    Check {
        #[command(flatten)]
        points: Points,
        #[command(flatten)]
        common: Common,
    },
    /// Decide irreducibility of the pure braid images A12, A23.
    Irreducible {
        #[command(flatten)]
        points: Points,
        #[command(flatten)]
        common: Common,
    },
    /// Run the elimination chain checks and the root disjointness verdict.
    VerifyProof {
        /// Number of random c values for the route-agreement sweep.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Width of the refined root intervals.
        #[arg(long, default_value_t = 1e-12)]
        precision: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Real-root inventory of one of the two split equations.
    Roots {
        /// imaginary (alias 29) or real (alias 30).
        #[arg(long = "eq")]
        equation: Equation,
        #[arg(long, default_value_t = 1e-12)]
        precision: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Random block data of size (n, m): construction, constraints and
    /// the block-criterion checklist.
    General {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
struct Points {
    /// A single value of c in (-1/2, 1/2).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "sweep")]
    c: Option<f64>,
    /// Inclusive grid start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    /// Admit c = 0, where the pure braid images become scalar.
    #[arg(long)]
    allow_degenerate: bool,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Primitive cube root of unity: plus (-1/2 + i√3/2) or minus.
    #[arg(long, default_value = "plus")]
    beta: BetaChoice,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; defaults to $AR_BRAID_OUTPUT_DIR/<command>.<ext>, or
    /// stdout when that is unset.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Tolerance override KEY=VALUE (repeatable).
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    tol: Vec<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

fn run(cli: Cli) -> Result<Status> {
    let (name, common, out) = match cli.command {
        Command::Matrices { points, common } => {
            let r = commands::matrices(&points.into(), &common.clone().into())?;
            ("matrices", common, r)
        }
        Command::Check { points, common } => {
            let r = commands::check(&points.into(), &common.clone().into())?;
            ("check", common, r)
        }
        Command::Irreducible { points, common } => {
            let r = commands::irreducible(&points.into(), &common.clone().into())?;
            ("irreducible", common, r)
        }
        Command::VerifyProof {
            samples,
            seed,
            precision,
            common,
        } => {
            let r = commands::verify_proof(samples, seed, precision, &common.clone().into())?;
            ("verify-proof", common, r)
        }
        Command::Roots {
            equation,
            precision,
            common,
        } => {
            let r = commands::roots(equation, precision, &common.clone().into())?;
            ("roots", common, r)
        }
        Command::General { n, m, seed, common } => {
            let r = commands::general(n, m, seed, &common.clone().into())?;
            ("general", common, r)
        }
    };
    output::emit(name, &out, common.format, common.output.as_deref())?;
    Ok(out.status)
}

impl From<Points> for commands::PointSpec {
    fn from(p: Points) -> Self {
        commands::PointSpec {
            c: p.c,
            sweep: p.sweep,
            allow_degenerate: p.allow_degenerate,
        }
    }
}

impl From<Common> for commands::Settings {
    fn from(c: Common) -> Self {
        commands::Settings {
            beta: c.beta,
            tol: c.tol,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => {
            if let Some(note) = status.note() {
                eprintln!("{note}");
            }
            ExitCode::from(status.code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Invalid>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
