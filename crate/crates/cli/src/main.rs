use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tightbell_cli::io::write_file;
use tightbell_cli::{cmd_conditions, cmd_enumerate, cmd_tighten, cmd_verify, cmd_violate, Outcome, Result, RunConfig};

/// Tight three-party correlation Bell inequalities: exact checks,
/// enumeration, facet certificates and quantum violations.
#[derive(Parser)]
#[command(name = "tightbell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the JSON report here and print a summary line instead.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Random restarts of the see-saw and frame optimizers.
    #[arg(long, global = true, default_value_t = tightbell_quantum::tol::SEESAW_RESTARTS)]
    restarts: usize,

    /// Grid step in degrees for cross-checks (10 for violations, 15 for conditions).
    #[arg(long, global = true)]
    grid_degrees: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Admissibility, norm conditions and delta families of a tensor.
    Verify {
        tensor: PathBuf,
        /// Also compute the facet certificate.
        #[arg(long)]
        tight: bool,
    },
    /// Catalog of tight inequalities for 3x3 or 3x3x3.
    Enumerate {
        #[arg(long, default_value = "3x3x3")]
        scenario: String,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_secs: Option<u64>,
    },
    /// Facet certificate of a tensor.
    Tighten { tensor: PathBuf },
    /// See-saw and grid maximization of a tensor on a state.
    Violate { tensor: PathBuf, state: PathBuf },
    /// Frame-optimized sufficient conditions for a state.
    Conditions { state: PathBuf },
}

fn run(cli: &Cli) -> Result<Outcome> {
    if cli.restarts == 0 {
        return Err(tightbell_cli::CliError::Usage("--restarts must be at least 1".into()));
    }
    let mut cfg = RunConfig {
        seed: cli.seed,
        restarts: cli.restarts,
        grid_degrees: cli.grid_degrees,
        ..RunConfig::default()
    };
    match &cli.command {
        Command::Verify { tensor, tight } => {
            cfg.certify = *tight;
            cmd_verify(tensor, &cfg)
        }
        Command::Enumerate {
            scenario,
            budget_nodes,
            budget_secs,
        } => cmd_enumerate(scenario, &cfg.with_budget(*budget_nodes, *budget_secs)),
        Command::Tighten { tensor } => cmd_tighten(tensor),
        Command::Violate { tensor, state } => cmd_violate(tensor, state, &cfg),
        Command::Conditions { state } => cmd_conditions(state, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = write_file(path, &outcome.json) {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                    println!("{}", outcome.summary);
                }
                None => print!("{}", outcome.json),
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
