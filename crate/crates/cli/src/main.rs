//! `phenom`: mine, curate, generate, split and evaluate NLI challenge sets.

mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phenom_core::Phenomenon;
use phenom_harness::{Builtin, ReportFormat};

use commands::AdapterVerb;
use config::{Overrides, ProjectConfig};
use error::{Category, CliError, CliResult};

#[derive(Parser)]
#[command(name = "phenom", version, about = "Controlled NLI challenge sets and learning curves")]
struct Cli {
    /// Project config file.
    #[arg(long, short, global = true, default_value = "phenom.toml")]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long, global = true, env = "PHENOM_SEED")]
    seed: Option<u64>,
    /// Overrides paths.out.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides paths.templates.
    #[arg(long, global = true)]
    templates: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract candidate premises from the corpus.
    Mine {
        #[arg(long)]
        phenomenon: Option<Phenomenon>,
    },
    /// Write the annotation worksheet, or fold a filled one back into the templates.
    Worksheet {
        #[arg(long)]
        ingest: Option<PathBuf>,
    },
    /// Check templates; with no path, the configured templates.
    Validate { path: Option<PathBuf> },
    /// Generate the labeled dataset and its statistics.
    Generate,
    /// Split the generated dataset into train and test sides.
    Split {
        /// Also write train/test JSONL per split.
        #[arg(long)]
        materialize: bool,
    },
    /// Run the configured probing or learning-curve experiment.
    Run,
    /// Re-emit reports from a saved learning curve.
    Report {
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long = "format", value_parser = parse_format)]
        formats: Vec<ReportFormat>,
    },
    /// A built-in baseline behind the adapter protocol.
    Adapter {
        #[arg(value_parser = parse_builtin)]
        kind: Builtin,
        #[command(subcommand)]
        verb: Verb,
    },
}

#[derive(Subcommand)]
enum Verb {
    Train {
        train: PathBuf,
        model_dir: PathBuf,
        seed: u64,
    },
    Predict {
        model_dir: PathBuf,
        test: PathBuf,
        output: PathBuf,
    },
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: phenom_harness::Error| e.to_string())
}

fn parse_builtin(s: &str) -> Result<Builtin, String> {
    s.parse().map_err(|e: phenom_harness::Error| e.to_string())
}

fn load(cli: &Cli) -> CliResult<ProjectConfig> {
    let overrides = Overrides {
        seed: cli.seed,
        out: cli.out.clone(),
        templates: cli.templates.clone(),
    };
    ProjectConfig::load(&cli.config, &overrides)
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    let done = |path: PathBuf| println!("wrote {}", path.display());
    match &cli.command {
        Command::Mine { phenomenon } => done(commands::mine(&load(cli)?, *phenomenon)?),
        Command::Worksheet { ingest } => done(commands::worksheet(&load(cli)?, ingest.as_deref())?),
        Command::Validate { path } => {
            let path = match path {
                Some(p) => p.clone(),
                None => load(cli)?.paths.templates,
            };
            let n = commands::validate(&path)?;
            println!("{n} templates valid");
        }
        Command::Generate => done(commands::generate(&load(cli)?)?),
        Command::Split { materialize } => done(commands::split(&load(cli)?, *materialize)?),
        Command::Run => {
            let outcome = commands::run(&load(cli)?)?;
            done(outcome.manifest);
            if outcome.failures > 0 {
                return Err(CliError::new(
                    Category::Adapter,
                    format!("{} repeats failed; see failures in the curve", outcome.failures),
                ));
            }
        }
        Command::Report { curve, formats } => {
            done(commands::report(&load(cli)?, curve.as_deref(), formats)?)
        }
        Command::Adapter { kind, verb } => {
            let verb = match verb {
                Verb::Train { train, model_dir, seed } => AdapterVerb::Train {
                    train: train.clone(),
                    model_dir: model_dir.clone(),
                    seed: *seed,
                },
                Verb::Predict { model_dir, test, output } => AdapterVerb::Predict {
                    model_dir: model_dir.clone(),
                    test: test.clone(),
                    output: output.clone(),
                },
            };
            commands::adapter(*kind, &verb)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("");
            let err = CliError::config(first.trim_start_matches("error: "));
            eprintln!("{}", err.line());
            return ExitCode::from(err.category.exit_code() as u8);
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.category.exit_code() as u8)
        }
    }
}
