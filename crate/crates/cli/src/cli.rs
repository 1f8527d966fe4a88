//! Argument parsing and file handling for the `stabilis` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use stabilis_core::amalgam::Mode;
use stabilis_core::cone::SearchBudget;
use stabilis_unitary::Tolerances;

use crate::commands::*;
use crate::op::{cmd_op, OpScenario};
use crate::report::Report;
use crate::scenario::Scenario;
use crate::{corpus, CliError};

#[derive(Debug, Parser)]
#[command(name = "stabilis", version, about = "Stabilize almost-actions of amalgams and HNN extensions over finite groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Io {
    /// Input JSON file, `-` for stdin.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Node budget for cone searches.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Strict,
    Flexible,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Flexible => Mode::Flexible,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Subgroup classes and the table of marks.
    Group(Io),
    /// Restriction cone, directions and the extension property of an inclusion.
    Restrict(Io),
    /// Density vector, membership and matching in an integer cone.
    Cone(Io),
    /// Perturb a scenario's input with seeded random transpositions.
    Perturb {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run scenarios (one or an array) and write reports.
    Stabilize {
        #[command(flatten)]
        io: Io,
        /// Run a bundled scenario (`all` for every one) instead of `--in`.
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Re-check reports written by `stabilize`.
    Verify(Io),
    /// Defect-versus-distance sweep; CSV rows to `--out`, fitted constants to stdout.
    Sweep {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Largest perturbation size; `|X|/8` by default.
        #[arg(long)]
        k_max: Option<usize>,
        /// Number of seeds per perturbation size.
        #[arg(long, default_value_t = 4)]
        seeds: u64,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Operator-norm amalgam or HNN construction on unitary generator images.
    Op {
        #[command(flatten)]
        io: Io,
        /// Tolerance for checked identities.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    pub fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

fn read_input(io: &Io) -> Result<String, CliError> {
    match io.input.as_deref() {
        None => Err(CliError::Parse("missing --in".into())),
        Some(p) if p.as_os_str() == "-" => Ok(std::io::read_to_string(std::io::stdin())?),
        Some(p) => Ok(std::fs::read_to_string(p)?),
    }
}

fn parse<T: DeserializeOwned>(io: &Io) -> Result<T, CliError> {
    Ok(serde_json::from_str(&read_input(io)?)?)
}

fn write_output(io: &Io, text: &str) -> Result<(), CliError> {
    match &io.out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(x: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(x)?)
}

fn budget(io: &Io) -> SearchBudget {
    io.budget.map(SearchBudget::nodes).unwrap_or_default()
}

fn scenarios(io: &Io, bundled: &Option<String>, mode: Option<ModeArg>) -> Result<Vec<Scenario>, CliError> {
    let mut list = match bundled.as_deref() {
        Some("all") => corpus::all(),
        Some(name) => vec![corpus::get(name).ok_or_else(|| {
            CliError::Parse(format!("no bundled scenario {name:?}; available: {}", corpus::names().join(", ")))
        })?],
        None => parse::<OneOrMany<Scenario>>(io)?.into_vec(),
    };
    for s in &mut list {
        if let Some(m) = mode {
            s.mode = m.into();
        }
        if io.budget.is_some() {
            s.budget = io.budget;
        }
    }
    Ok(list)
}

pub fn run<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Parse(e.to_string())),
    };
    match &cli.command {
        Command::Group(io) => write_output(io, &json(&cmd_group(&parse(io)?)?)?),
        Command::Restrict(io) => write_output(io, &json(&cmd_restrict(&parse(io)?, &budget(io))?)?),
        Command::Cone(io) => write_output(io, &json(&cmd_cone(&parse(io)?, &budget(io))?)?),
        Command::Perturb { io, k, seed } => write_output(io, &json(&cmd_perturb(&parse(io)?, *k, *seed)?)?),
        Command::Stabilize { io, corpus, mode } => {
            let list = scenarios(io, corpus, *mode)?;
            let reports = cmd_stabilize(&list).into_iter().collect::<Result<Vec<_>, _>>()?;
            if let Some(bad) = reports.iter().find(|r| !r.result.verified) {
                return Err(CliError::Verification(format!("{}: output relations fail", bad.scenario.name)));
            }
            let text = if reports.len() == 1 && corpus.as_deref() != Some("all") {
                json(&reports[0])?
            } else {
                json(&reports)?
            };
            write_output(io, &text)
        }
        Command::Verify(io) => {
            let reports = parse::<OneOrMany<Report>>(io)?.into_vec();
            cmd_verify(&reports)?;
            write_output(io, &format!("ok: {} report(s) verified", reports.len()))
        }
        Command::Sweep {
            io,
            corpus,
            mode,
            k_max,
            seeds,
            seed,
        } => {
            let list = scenarios(io, corpus, *mode)?;
            let seed_list: Vec<u64> = (*seed..seed + seeds).collect();
            let mut rows = Vec::new();
            let mut fitted = Vec::new();
            for s in &list {
                let (r, f) = cmd_sweep(s, *k_max, &seed_list)?;
                rows.extend(r);
                fitted.push(f);
            }
            let csv = sweep_csv(&rows)?;
            match &io.out {
                Some(p) => std::fs::write(p, csv)?,
                None => print!("{csv}"),
            }
            let summary = json(&fitted)?;
            if io.out.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            if let Some(bad) = fitted.iter().find(|f| !f.all_verified) {
                return Err(CliError::Verification(format!("{}: unverified sweep rows", bad.scenario)));
            }
            Ok(())
        }
        Command::Op { io, tol } => {
            let tol = Tolerances {
                assertion: *tol,
                ..Tolerances::default()
            };
            let s: OpScenario = parse(io)?;
            write_output(io, &json(&cmd_op(&s, &tol)?)?)
        }
    }
}
