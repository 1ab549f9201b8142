use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};
use qmslab::commands::{self, Figure};
use qmslab::config::{CommonArgs, Settings};

#[derive(Parser)]
#[command(
    name = "qmslab",
    version,
    about = "Families of random 1D quantum systems: solvers, sudden-field dynamics, and metric-space figures"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the family's potentials as (x, V - E0) profiles plus an index.
    Potentials {
        /// Electron count the family is meant for (picks grid and preset table).
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
        electrons: u32,
    },
    /// Solve one system's one-electron ground state and export the orbital.
    Solve1e {
        /// 1-based system index within the family.
        #[arg(long, default_value_t = 1)]
        system: usize,
    },
    /// Solve one system's two-electron ground state in the antisymmetric
    /// sector and export the pair amplitude and density.
    Solve2e {
        /// 1-based system index within the family.
        #[arg(long, default_value_t = 1)]
        system: usize,
        /// Include the soft Coulomb repulsion (the default).
        #[arg(long, conflicts_with = "non_interacting")]
        interacting: bool,
        /// Drop the repulsion (independent electrons).
        #[arg(long = "non-interacting")]
        non_interacting: bool,
    },
    /// Propagate one system's ground state through the sudden field and
    /// export per-snapshot densities.
    Propagate {
        /// 1-based system index within the family.
        #[arg(long, default_value_t = 1)]
        system: usize,
        /// Sudden field strength (overrides the configured value).
        #[arg(long, value_name = "EPS", allow_hyphen_values = true)]
        epsilon: Option<f64>,
    },
    /// Solve the whole family and write its pairwise distance records.
    Distances {
        /// Electrons per system.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
        electrons: u32,
        /// Include the soft Coulomb repulsion for 2-electron families (the default).
        #[arg(long, conflicts_with = "non_interacting")]
        interacting: bool,
        /// Drop the repulsion (independent electrons).
        #[arg(long = "non-interacting")]
        non_interacting: bool,
    },
    /// Reproduce a figure pipeline end to end: records, summary, plot data.
    Experiment {
        #[command(subcommand)]
        which: FigureCommand,
    },
    /// Render distance records as a standalone scatter SVG.
    Plot {
        /// Input records.csv or fig*_data.csv files.
        #[arg(required = true, value_name = "CSV")]
        inputs: Vec<PathBuf>,
        /// Output SVG path (defaults to the first input's stem under --out).
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FigureCommand {
    /// One-electron sudden-field trails against the ground-state line.
    Fig2 {
        /// Reference system the trails are measured from.
        #[arg(long, value_name = "ID")]
        reference: Option<u32>,
        /// Sudden field strength (overrides the configured value).
        #[arg(long, value_name = "EPS", allow_hyphen_values = true)]
        epsilon: Option<f64>,
    },
    /// Two-electron interacting ground-state family.
    Fig3,
    /// Two-electron non-interacting ground-state family.
    Fig4,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let settings = Settings::resolve(&cli.common)?;
    match cli.command {
        Command::Potentials { electrons } => commands::cmd_potentials(&settings, electrons),
        Command::Solve1e { system } => commands::cmd_solve1e(&settings, system),
        Command::Solve2e {
            system,
            interacting: _,
            non_interacting,
        } => commands::cmd_solve2e(&settings, system, !non_interacting),
        Command::Propagate { system, epsilon } => {
            commands::cmd_propagate(&settings, system, epsilon)
        }
        Command::Distances {
            electrons,
            interacting: _,
            non_interacting,
        } => commands::cmd_distances(&settings, electrons, !non_interacting),
        Command::Experiment { which } => match which {
            FigureCommand::Fig2 { reference, epsilon } => {
                commands::cmd_experiment(&settings, Figure::Fig2, reference, epsilon)
            }
            FigureCommand::Fig3 => commands::cmd_experiment(&settings, Figure::Fig3, None, None),
            FigureCommand::Fig4 => commands::cmd_experiment(&settings, Figure::Fig4, None, None),
        },
        Command::Plot { inputs, output } => commands::cmd_plot(&settings, &inputs, output),
    }
}
