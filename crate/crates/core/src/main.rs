use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use firstshell::cli::{cmd_simulate, cmd_sweep, cmd_verify, Overrides};

#[derive(Parser)]
#[command(name = "firstshell", version, about = "2D Euler first-shell stability experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one perturbed trajectory and write diagnostics.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run an epsilon sweep and fit the scaling exponent.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run the static self-test battery.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Grid size for the field-based checks.
        #[arg(long)]
        n: Option<usize>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate { config, out, workers } => cmd_simulate(&config, &Overrides { out, workers }),
        Command::Sweep { config, out, workers } => cmd_sweep(&config, &Overrides { out, workers }),
        Command::Verify { config, n } => cmd_verify(config.as_deref(), n),
    };
    ExitCode::from(code as u8)
}
