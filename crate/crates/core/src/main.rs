use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use causalab::cli::{load_config, run, CliError, Command, PlotKind, RunOptions};

/// Boundary confinement, instantaneous spreading and the nonrelativistic
/// limit of free fields, as batch computations.
#[derive(Debug, Parser)]
#[command(name = "causalab", version)]
struct Args {
    /// Computation to run.
    #[arg(value_enum)]
    command: Command,

    /// JSON file of flat configuration keys.
    #[arg(long)]
    config: PathBuf,

    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,

    /// Also write an SVG plot of the result table.
    #[arg(long, value_enum)]
    plot: Option<PlotKind>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("causalab {}: {e}", args.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    let config = load_config(args.command, &args.config)?;
    let options = RunOptions {
        out: args.out.clone(),
        jobs: args.jobs,
        plot: args.plot,
    };
    let report = run(&config, &options)?;
    eprintln!("wrote {}", report.csv.display());
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
