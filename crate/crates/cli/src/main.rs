//! `trotter-lab`: run configured experiment batteries and write their reports.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use trotter_core::experiment::{run, ExperimentConfig, ExperimentKind, OutputFormat};
use trotter_core::Error;

#[derive(Debug, Parser)]
#[command(name = "trotter-lab", version, about = "Trotter product formula experiments")]
struct Cli {
    /// Print the available experiments and exit.
    #[arg(long)]
    list_experiments: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config file.
    Run {
        config: PathBuf,
        /// Write the report here instead of the config's output path or stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_parser = parse_format)]
        format: Option<OutputFormat>,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

const EXIT_CHECKS_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_experiments {
        for kind in ExperimentKind::ALL {
            println!("{:<18} {}", kind.name(), kind.description());
        }
        return ExitCode::SUCCESS;
    }
    let Some(Command::Run { config, output, format, seed }) = cli.command else {
        eprintln!("error: nothing to do; try `trotter-lab run <config>` or `--list-experiments`");
        return ExitCode::from(EXIT_USAGE);
    };
    match run_config(&config, output, format, seed) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECKS_FAILED),
        Err(err) => {
            eprintln!("error: {err:#}");
            let usage = err.downcast_ref::<Error>().is_some_and(is_usage) || err.downcast_ref::<std::io::Error>().is_some();
            ExitCode::from(if usage { EXIT_USAGE } else { EXIT_NUMERIC })
        }
    }
}

fn is_usage(e: &Error) -> bool {
    match e {
        Error::Usage(_) => true,
        Error::Context { source, .. } => is_usage(source),
        _ => false,
    }
}

fn infer_format(path: &Path) -> Option<OutputFormat> {
    match path.extension()?.to_str()? {
        "json" => Some(OutputFormat::Json),
        "csv" => Some(OutputFormat::Csv),
        _ => None,
    }
}

fn run_config(path: &Path, output: Option<PathBuf>, format: Option<OutputFormat>, seed: Option<u64>) -> anyhow::Result<bool> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config = ExperimentConfig::from_json(&text)?;
    let report = run(&config, seed)?;

    let target = output.or_else(|| config.output.path.clone());
    let format = format
        .or(config.output.format)
        .or_else(|| target.as_deref().and_then(infer_format))
        .unwrap_or_default();
    let rendered = report.render(format);
    match &target {
        Some(p) => std::fs::write(p, rendered).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{rendered}"),
    }

    for c in &report.checks {
        eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    eprintln!(
        "{}: {} in {:.2} s",
        report.experiment,
        if report.passed { "passed" } else { "failed" },
        report.wall_clock.as_secs_f64()
    );
    Ok(report.passed)
}
