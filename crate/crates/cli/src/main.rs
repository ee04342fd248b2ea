use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use entscale_cli::{run, ConfigError, ConfigFile, Experiment, Overrides, RunConfig, RunError};

/// Run one experiment and write `<out>` (CSV) plus `<out>.json` (envelope).
///
/// Exit codes: 0 success, 1 config error, 2 numerical or output failure.
/// ENTSCALE_THREADS caps the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "entscale", version)]
struct Cli {
    /// quench, w-hierarchy, lightcone, kcheck, quasilocal, fermion-scaling,
    /// ring-check or property-suite
    experiment: String,
    /// Model or symbol config file (key = value lines, term lines, symbol lines)
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path [default: <experiment>.csv]
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed for property-suite; recorded in every envelope
    #[arg(long)]
    seed: Option<String>,
    /// Chain length for spin experiments and property-suite
    #[arg(long)]
    n: Option<String>,
    /// `a:b:steps` or a comma list
    #[arg(long)]
    t_grid: Option<String>,
    /// Comma list of integers, `a..b` or `a..b*ratio`
    #[arg(long)]
    m_list: Option<String>,
    /// xx, xy_cross or zfield (spin); paper or half_filling (symbol)
    #[arg(long)]
    preset: Option<String>,
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("ENTSCALE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| ConfigError::Invalid { name: "ENTSCALE_THREADS".into(), message: format!("`{raw}` is not a positive integer") })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| ConfigError::Invalid { name: "ENTSCALE_THREADS".into(), message: e.to_string() })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match start(cli) {
        Ok(out) => {
            eprintln!("wrote {}", out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("entscale: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn start(cli: Cli) -> Result<PathBuf, RunError> {
    configure_threads()?;
    let experiment: Experiment = cli.experiment.parse().map_err(|m| ConfigError::Invalid { name: "experiment".into(), message: m })?;
    let file = match &cli.config {
        Some(path) => ConfigFile::read(path)?,
        None => ConfigFile::default(),
    };
    let overrides = Overrides { preset: cli.preset, n: cli.n, t_grid: cli.t_grid, m_list: cli.m_list, seed: cli.seed };
    let cfg = RunConfig::resolve(experiment, file, &overrides)?;
    let out = cli.out.unwrap_or_else(|| PathBuf::from(format!("{experiment}.csv")));
    run(&cfg, &out)?;
    Ok(out)
}
