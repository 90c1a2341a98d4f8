use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use soog_cli::commands::{cmd_build, cmd_count, cmd_eval, cmd_report, cmd_solve};
use soog_cli::config::ExperimentConfig;
use soog_cli::exit_code;
use soog::{Result, SoogError};

/// Hand-abstraction pipeline: count classes, build abstractions, solve the
/// abstracted games, and evaluate lifted strategies in the original game.
#[derive(Parser)]
#[command(name = "soog", version, disable_help_subcommand = true)]
struct Cli {
    /// Game id: leduc, numeral211 or hulh-cards.
    #[arg(long, global = true)]
    game: Option<String>,
    /// Flat key=value experiment configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Artifact directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker cap (accepted for compatibility; the pipeline is currently
    /// single-threaded).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed overriding the configuration file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print per-phase class counts (raw for algorithm "none").
    Count {
        game: Option<String>,
        algorithm: Option<String>,
    },
    /// Build and persist the configured abstraction map.
    Build,
    /// Solve the abstracted game; write strategies per checkpoint.
    Solve,
    /// Evaluate saved strategies; write the exploitability curve CSV.
    Eval,
    /// Merge evaluation curve CSVs into one comparison CSV.
    Report { inputs: Vec<PathBuf> },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                SoogError::Dependency(format!("config {}: {e}", path.display()))
            })?;
            ExperimentConfig::from_text(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(game) = &cli.game {
        cfg.game = Some(game.clone());
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        cfg.jobs = jobs;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cli: &Cli) -> Result<PathBuf> {
    cli.out
        .clone()
        .ok_or_else(|| SoogError::Parameter("this command needs --out".into()))
}

fn run(cli: &Cli) -> Result<()> {
    let mut cfg = load_config(cli)?;
    match &cli.cmd {
        Cmd::Count { game, algorithm } => {
            if let Some(g) = game {
                cfg.game = Some(g.clone());
            }
            if let Some(a) = algorithm {
                cfg.algorithm = a.parse()?;
            }
            cmd_count(&cfg, cli.out.as_deref())?;
        }
        Cmd::Build => {
            cmd_build(&cfg, &out_dir(cli)?)?;
        }
        Cmd::Solve => {
            cmd_solve(&cfg, &out_dir(cli)?)?;
        }
        Cmd::Eval => {
            cmd_eval(&cfg, &out_dir(cli)?)?;
        }
        Cmd::Report { inputs } => {
            cmd_report(&out_dir(cli)?, inputs)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; anything else is a
            // usage error (exit 1).
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
