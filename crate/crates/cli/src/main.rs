//! `rpsdm` command-line harness.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical
//! failure. `RPSDM_THREADS` sets the worker thread count.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::commands::RunError;
use crate::config::{Command, ConfigError, Settings, SimConfig};

const THREADS_ENV: &str = "RPSDM_THREADS";

#[derive(Parser)]
#[command(name = "rpsdm", version, about = "RPSDM vs OFDM experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

/// Options shared by every subcommand. Every setting may also come from
/// `--config`; flags win.
#[derive(Args)]
struct Common {
    /// Flat `key = value` config file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output file; stdout when absent. Runs producing several CSV curves
    /// write `<stem>_<label>.<ext>` next to it.
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// csv, json, or table (papr-worst and complexity only).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct NArgs {
    /// Block length(s), comma separated.
    #[arg(long)]
    n: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct WorstArgs {
    #[arg(long)]
    n: Option<String>,
    /// QAM order: 4, 16 or 64.
    #[arg(long)]
    m: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    n: Option<String>,
    /// Channel length for a random Rayleigh draw.
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// production, congruence or unnormalized.
    #[arg(long)]
    pair: Option<String>,
    /// Explicit taps instead of a random draw, e.g. `-2+4i,3,1-5i,-4i`.
    #[arg(long, allow_hyphen_values = true)]
    taps: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CcdfArgs {
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    m: Option<String>,
    /// ofdm, rpsdm or both, comma separated.
    #[arg(long)]
    scheme: Option<String>,
    /// PAPR thresholds in dB: `start:step:stop` or a list.
    #[arg(long, allow_hyphen_values = true)]
    thresholds: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BerArgs {
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    /// zf, mmse or both, comma separated.
    #[arg(long)]
    detector: Option<String>,
    /// SNR grid in dB: `start:step:stop` or a list.
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
    /// Blocks per SNR point (default: enough for 10^5 symbols).
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// MMSE hard decisions: unbiased or biased.
    #[arg(long)]
    decision: Option<String>,
    /// es (per symbol) or eb (per bit).
    #[arg(long)]
    snr_convention: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Sub {
    /// DFT magnitude of each Ramanujan subspace.
    Spectrum(NArgs),
    /// Effective RPSDM channel and its block structure.
    Decompose(DecomposeArgs),
    /// Monte Carlo PAPR CCDF.
    PaprCcdf(CcdfArgs),
    /// Closed-form worst-case PAPR.
    PaprWorst(WorstArgs),
    /// Monte Carlo BER with ZF / MMSE detection.
    Ber(BerArgs),
    /// Real operation counts.
    Complexity(NArgs),
    /// Integer transform matrix and column normalisation.
    DumpBasis(NArgs),
}

/// Settings given explicitly on the command line, plus the config path.
fn flag_settings(matches: &clap::ArgMatches) -> (Settings, Option<PathBuf>) {
    let mut s = Settings::default();
    let mut config = None;
    for id in matches.ids() {
        let id = id.as_str();
        if matches.value_source(id) != Some(ValueSource::CommandLine) {
            continue;
        }
        let Ok(Some(v)) = matches.try_get_one::<String>(id) else {
            if id == "config" {
                config = matches.get_one::<PathBuf>(id).cloned();
            }
            continue;
        };
        s.insert(id, v.clone());
    }
    (s, config)
}

fn resolve() -> Result<SimConfig, ConfigError> {
    let matches = match Cli::command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            return Err(ConfigError(e.render().to_string().trim_end().to_string()));
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let command = Command::from_name(name).expect("known subcommand");
    let (flags, config_path) = flag_settings(sub);
    let mut settings = match config_path {
        Some(p) => Settings::load(&p)?,
        None => Settings::default(),
    };
    settings.merge(flags);
    SimConfig::from_settings(command, settings)
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = v.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        ConfigError(format!(
            "{THREADS_ENV}: expected a positive integer, got `{v}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| ConfigError(format!("{THREADS_ENV}: {e}")))
}

fn main() -> ExitCode {
    let cfg = match configure_threads().and_then(|_| resolve()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let artifacts = match commands::run(&cfg) {
        Ok(a) => a,
        Err(RunError::Config(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(RunError::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            return ExitCode::from(3);
        }
    };
    match output::emit(cfg.out.as_deref(), cfg.format, &artifacts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
