use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qrouter_cli::{execute, load_config, CliError, Experiment};

/// Coherent quantum router experiments.
#[derive(Debug, Parser)]
#[command(name = "qrouter", version)]
struct Args {
    /// sweep-ratio, transfer, route-table, concat, three-output,
    /// circuit-derive, circuit-numeric or fidelity-point
    experiment: String,
    /// JSON configuration file; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; the metadata goes to `<stem>.meta.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qrouter: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let experiment: Experiment = args.experiment.parse()?;
    let cfg = load_config(experiment, args.config.as_deref(), args.seed, args.out.as_deref())?;
    let (table, csv, meta) = execute(&cfg)?;
    println!("{} rows -> {}", table.rows(), csv.display());
    println!("metadata -> {}", meta.display());
    if !table.metadata.summary.is_empty() {
        println!("{}", serde_json::to_string_pretty(&table.metadata.summary)?);
    }
    Ok(())
}
