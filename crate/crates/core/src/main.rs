use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use learnlab::suite::{emit_report, run_suite_file, SuiteError};

/// Run learnability experiment suites and render their reports.
#[derive(Parser)]
#[command(name = "learnlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment block in a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Render report.md from a finished run directory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to `<in>/report.md`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<PathBuf, SuiteError> = match cli.command {
        Command::Run { config, out, seed_override } => run_suite_file(&config, out.as_deref(), seed_override),
        Command::Report { input, out } => emit_report(&input, out.as_deref()),
    };
    match result {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("learnlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
