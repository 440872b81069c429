//! Command-line front end: scenario loading, figure and table reproduction,
//! CSV output.

pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{Case, Figure, Report};
use error::CliError;
use scenario::{load, LoadedScenario};

/// Seed fallback when `--seed` is absent.
pub const SEED_ENV: &str = "DRONELINK_SEED";

#[derive(Debug, Parser)]
#[command(name = "dronelink", version, about = "Massive MIMO drone link budgets and simulations")]
pub struct Cli {
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long, global = true)]
    pub scenario: Option<String>,
    /// Dotted `key=value` override, e.g. `link.drones=30`. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// CSV output path; defaults to `<command>.csv` in the working directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coherence time, interval length and frame split.
    Coherence {
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        fc: Option<f64>,
        #[arg(long)]
        bc: Option<f64>,
    },
    /// Free-space coverage range.
    Range,
    /// Antennas needed for a per-drone rate.
    Antennas {
        /// Per-drone target; defaults to the scenario sum target over K.
        #[arg(long)]
        target_bps: Option<f64>,
    },
    /// Ergodic-rate lower bound.
    Rate,
    /// Imaging geometry, data rates and swarm size.
    Mission,
    /// Reproduce a figure as CSV.
    Fig {
        #[arg(value_enum)]
        figure: Figure,
    },
    /// Design parameters for one case study.
    Table2 {
        #[arg(long, value_enum)]
        case: Case,
    },
    /// Print the effective scenario.
    Show,
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Coherence { .. } => "coherence".into(),
            Command::Range => "range".into(),
            Command::Antennas { .. } => "antennas".into(),
            Command::Rate => "rate".into(),
            Command::Mission => "mission".into(),
            Command::Fig { figure } => figure.name().into(),
            Command::Table2 { case } => format!("table2-{}", case.scenario()),
            Command::Show => "show".into(),
        }
    }
}

/// Outcome of a run: what to print and where the CSV went.
#[derive(Debug)]
pub struct Outcome {
    pub summary: Vec<String>,
    pub csv_path: Option<PathBuf>,
}

fn seed_override(cli_seed: Option<u64>) -> Result<Option<u64>, CliError> {
    if cli_seed.is_some() {
        return Ok(cli_seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("{SEED_ENV}={v:?} is not a u64"))),
        Err(_) => Ok(None),
    }
}

/// Loads the scenario with `--seed`/`--trials` folded in as overrides, so
/// the echoed scenario and its hash reflect them.
pub fn effective_scenario(cli: &Cli) -> Result<LoadedScenario, CliError> {
    let source = match &cli.command {
        Command::Table2 { case } => Some(case.scenario()),
        _ => cli.scenario.as_deref(),
    };
    let mut overrides = cli.overrides.clone();
    if let Some(seed) = seed_override(cli.seed)? {
        overrides.push(format!("sim.seed={seed}"));
    }
    if let Some(trials) = cli.trials {
        overrides.push(format!("sim.trials={trials}"));
    }
    load(source, &overrides)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let loaded = effective_scenario(cli)?;
    let s = &loaded.scenario;
    let report: Report = match &cli.command {
        Command::Coherence { v, fc, bc } => commands::coherence_cmd(s, *v, *fc, *bc)?,
        Command::Range => commands::range_cmd(s)?,
        Command::Antennas { target_bps } => commands::antennas_cmd(s, *target_bps)?,
        Command::Rate => commands::rate_cmd(s)?,
        Command::Mission => commands::mission_cmd(s)?,
        Command::Fig { figure } => commands::figure(s, *figure)?,
        Command::Table2 { .. } => commands::table2_cmd(s)?,
        Command::Show => {
            return Ok(Outcome {
                summary: loaded.canonical.lines().map(str::to_owned).collect(),
                csv_path: None,
            })
        }
    };
    let name = cli.command.name();
    let metadata = vec![
        ("tool".to_owned(), format!("dronelink {}", env!("CARGO_PKG_VERSION"))),
        ("command".to_owned(), name.clone()),
        ("scenario".to_owned(), s.name.clone()),
        ("scenario_sha256".to_owned(), loaded.hash()),
        ("seed".to_owned(), s.sim.seed.to_string()),
        ("trials".to_owned(), s.sim.trials.to_string()),
        ("effective_scenario".to_owned(), loaded.canonical.clone()),
    ];
    let path = cli.out.clone().unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
    output::write_atomic(&path, &output::render(&metadata, &report.table))?;
    Ok(Outcome {
        summary: report.summary,
        csv_path: Some(path),
    })
}
