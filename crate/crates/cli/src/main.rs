use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Post-processing minimality of joint quantum observables.
#[derive(Debug, Parser)]
#[command(name = "jointmin", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the boundary tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide minimality of a joint instance or a qubit instance with the
    /// general algorithm.
    Check {
        #[command(flatten)]
        common: Common,
        /// After a NOT_MINIMAL verdict, descend to a minimal joint below it.
        #[arg(long)]
        descend: bool,
    },
    /// Closed-form decision for a qubit instance.
    QubitCheck {
        #[command(flatten)]
        common: Common,
        /// Also run the general algorithm and require agreement.
        #[arg(long)]
        cross_validate: bool,
        #[arg(long)]
        descend: bool,
    },
    /// CSV of cell verdicts over g = c1 a + c2 b for unbiased marginals.
    Region {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = jointmin::qubit::DEFAULT_GRID)]
        grid: usize,
    },
    /// Pairwise-reduced observable with forward and backward kernels.
    Reduce {
        #[command(flatten)]
        common: Common,
    },
    /// Joint observable from a common observable and one kernel per marginal.
    Joint {
        #[command(flatten)]
        common: Common,
    },
    /// Vertex enumeration of a bounded linear system.
    Vertices {
        #[command(flatten)]
        common: Common,
    },
    /// Closed form against the general algorithm on seeded random unbiased
    /// qubit instances.
    OracleCompare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_CONSISTENCY: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
