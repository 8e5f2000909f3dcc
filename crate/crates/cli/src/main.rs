use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use classicality_cli::commands::{
    cmd_decompose, cmd_generate, cmd_generators, cmd_sweep, cmd_witness, GenerateParams,
};
use classicality_cli::Family;

/// Detect zero quantum correlation of bipartite qudit states.
#[derive(Parser)]
#[command(name = "classicality", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the SU(n) generator basis with orthogonality diagnostics
    Generators {
        /// Local dimension n >= 2
        #[arg(long)]
        dim: usize,
    },
    /// Evaluate the witness on a state file and classify it
    Witness {
        /// Path to a bipartite state file
        #[arg(long)]
        input: PathBuf,
        /// Number of random direction pairs (K)
        #[arg(long, default_value_t = 8)]
        samples: usize,
        /// Zero threshold on expectations and witness values
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Base seed for the direction streams
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Print the Bloch decomposition (r, s, T) of a state file
    Decompose {
        /// Path to a bipartite state file
        #[arg(long)]
        input: PathBuf,
    },
    /// Generate a state file from a named family
    Generate {
        #[arg(long)]
        family: Family,
        /// Local dimension n >= 2
        #[arg(long)]
        dim: usize,
        /// Generator row index (x_form only, 1-based); random if omitted
        #[arg(long)]
        i: Option<usize>,
        /// Generator column index (x_form only, 1-based); random if omitted
        #[arg(long)]
        j: Option<usize>,
        /// Correlation strength (x_form only); random admissible if omitted
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output path for the state file
        #[arg(long, default_value = "state.json")]
        out: PathBuf,
    },
    /// Run a Monte Carlo sweep from a JSON config and emit CSV
    Sweep {
        /// Path to the sweep config
        #[arg(long)]
        config: PathBuf,
        /// CSV output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generators { dim } => cmd_generators(dim),
        Command::Witness {
            input,
            samples,
            tol,
            seed,
        } => cmd_witness(&input, samples, tol, seed),
        Command::Decompose { input } => cmd_decompose(&input),
        Command::Generate {
            family,
            dim,
            i,
            j,
            t,
            seed,
            out,
        } => cmd_generate(&GenerateParams {
            family,
            dim,
            i,
            j,
            t,
            seed,
            out,
        }),
        Command::Sweep { config, out } => cmd_sweep(&config, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
