use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{error, info};
use nuclab_cli::config::{ConfigError, KEYS};
use nuclab_cli::{run_pipeline, RunConfig, RunError, Stage};
use nuclab_core::DecayVariant;

const OUT_ENV: &str = "NUCLAB_OUT";
const DEFAULT_OUT: &str = "nuclab-out";

/// Numerics for false-vacuum nucleation, slow roll and k-essence dark matter.
///
/// Any config key can also be given as `--key=value`; those overrides win
/// over the config file.
#[derive(Debug, Parser)]
#[command(name = "nuclab", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (falls back to out_dir, then $NUCLAB_OUT, then ./nuclab-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Decay constant used for the k-essence offset.
    #[arg(long, global = true, value_parser = ["exact", "paper"])]
    variant: Option<String>,

    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Stationary points, vacua, gap brackets and the potential curve.
    Potential,
    /// Slow-roll and epsilon/eta diagnostics at the vacua and phi*.
    Slowroll,
    /// Wave functionals, amplitudes and nucleation rates.
    Tunneling,
    /// k-essence trajectory, regime sweep and suppression.
    Kessence,
    /// Every stage (default).
    All,
}

impl From<Command> for Stage {
    fn from(c: Command) -> Self {
        match c {
            Command::Potential => Stage::Potential,
            Command::Slowroll => Stage::SlowRoll,
            Command::Tunneling => Stage::Tunneling,
            Command::Kessence => Stage::KEssence,
            Command::All => Stage::All,
        }
    }
}

/// Pulls `--key=value` pairs for config keys out of the argument list.
fn split_overrides(args: impl IntoIterator<Item = OsString>) -> (Vec<OsString>, Vec<(String, String)>) {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    for arg in args {
        let parsed = arg
            .to_str()
            .and_then(|s| s.strip_prefix("--"))
            .and_then(|s| s.split_once('='))
            .filter(|(k, _)| KEYS.contains(k));
        match parsed {
            Some((k, v)) => overrides.push((k.to_owned(), v.to_owned())),
            None => rest.push(arg),
        }
    }
    (rest, overrides)
}

fn build_config(cli: &Cli, overrides: &[(String, String)]) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        config.merge_file(path)?;
    }
    for (k, v) in overrides {
        config.set(k, v)?;
    }
    if let Some(v) = &cli.variant {
        config.variant = v.parse::<DecayVariant>().map_err(ConfigError::Invalid)?;
    }
    Ok(config)
}

fn out_dir(cli: &Cli, config: &RunConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| config.out_dir.clone())
        .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let (args, overrides) = split_overrides(std::env::args_os());
    let cli = Cli::parse_from(args);

    let config = match build_config(&cli, &overrides).and_then(|c| c.validate().map(|()| c)) {
        Ok(c) => c,
        Err(e) => {
            error!("configuration: {e}");
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.print_config {
        print!("{}", config.dump());
        return ExitCode::SUCCESS;
    }

    let stage = cli.command.map_or(Stage::All, Stage::from);
    let dir = out_dir(&cli, &config);
    match run_pipeline(&config, stage, &dir) {
        Ok(paths) => {
            for p in &paths {
                info!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if !matches!(e, RunError::Numeric { .. }) {
                error!("{e}");
            }
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}
