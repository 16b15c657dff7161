use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ecpp_cli::{compare, format_table, load_reports, run, RunConfig};

/// Edge coverage path planning for mowing robots.
#[derive(Parser)]
#[command(name = "ecpp", version)]
struct Cli {
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,

    /// Reserved for randomized corpora; the pipeline itself is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan, evaluate and plot every configured method.
    Run {
        config: PathBuf,
        /// Output directory, overriding the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate uncut areas and reductions against the big-disk baseline.
    Compare {
        #[arg(required = true, num_args = 1..)]
        reports: Vec<PathBuf>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

/// Exit codes: 0 success, 1 invalid input or I/O failure, 2 some planners
/// failed while the rest completed.
fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(seed) = cli.seed {
        log::debug!("seed {seed} accepted; nothing in the pipeline is random");
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Run { config, out } => {
            let config = RunConfig::load(config)?;
            let status = run(&config, out.as_deref())?;
            if !cli.quiet {
                print!("{}", status.summary);
                println!("wrote {} files to {}", status.files.len(), status.output_dir.display());
            }
            Ok(if status.complete { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Compare { reports } => {
            let rows = compare(&load_reports(reports)?)?;
            print!("{}", format_table(&rows));
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let config = RunConfig::load(config)?;
            config.load_boundary()?;
            if !cli.quiet {
                println!("ok: {} planner(s)", config.planners.len());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
