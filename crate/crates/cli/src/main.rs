mod commands;
mod error;
mod matrix_file;
mod sweep;
mod table;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eof_core::envelope::DEFAULT_GRID;

use crate::commands::{Family, FamilyParams};
use crate::error::Result;
use crate::sweep::Sweep;
use crate::verify::Suite;

/// Lower and upper bounds on the entanglement of formation of bipartite
/// density matrices.
#[derive(Debug, Parser)]
#[command(name = "eofb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bounds for a state read from a matrix file.
    Bounds {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Tabulate X, Y and the envelopes epsilon and eta.
    Envelope {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounds along a parameter sweep of a built-in state family.
    Example {
        #[arg(long, value_enum)]
        family: Family,
        /// Local dimension of the Werner family.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        f: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        x: Option<f64>,
        /// name=start:stop:step
        #[arg(long, allow_hyphen_values = true)]
        sweep: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Where to write the first offending state.
        #[arg(long, default_value = "verify-failure.state")]
        dump: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bounds { file, grid } => commands::bounds(&file, grid),
        Command::Envelope { m, grid, out } => commands::envelope(m, grid, out.as_deref()),
        Command::Example {
            family,
            d,
            f,
            a,
            x,
            sweep,
            grid,
            out,
        } => {
            let sweep: Option<Sweep> = sweep.as_deref().map(str::parse).transpose()?;
            let params = FamilyParams { d, f, a, x };
            commands::example(family, &params, sweep.as_ref(), grid, out.as_deref())
        }
        Command::Verify {
            suite,
            n,
            seed,
            grid,
            dump,
        } => verify::run(suite, n, seed, grid, &dump),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
