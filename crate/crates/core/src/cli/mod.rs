//! Batch front end: JSON configs in, JSON and CSV reports out.
//!
//! Exit codes are 0 on success, 1 on an input or configuration error and 2 when a
//! condition of the bounds is violated (the reports are still written).

mod commands;
mod config;
mod provenance;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

pub use commands::{
    bounds_report, cmd_bounds, cmd_expand, cmd_kernel_study, exit, BoundsReport, Outcome,
};
pub use config::{
    find_fixture, BoundsConfig, ExpandConfig, ExpandInput, KernelStudyConfig, MatrixSource,
};
pub use provenance::Provenance;

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "spectra", version, about = "Spectral perturbation expansions and kernel Monte Carlo studies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First-order expansion reports for a matrix pair.
    Expand(CommonArgs),
    /// Monte Carlo study of a kernel Gram matrix.
    KernelStudy(CommonArgs),
    /// Concentration constants, radius and bilinear bound for given parameters.
    Bounds(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
}

/// Default output directory when `--out` is absent.
pub const DEFAULT_OUT: &str = "spectra-out";

fn read_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

fn reject(flag: &str, given: bool, command: &str) -> Result<()> {
    if given {
        Err(Error::ConfigInvalid(format!("--{flag} does not apply to {command}")))
    } else {
        Ok(())
    }
}

fn base_dir(config: &Path) -> PathBuf {
    config
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Expand(a) => {
            reject("seed", a.seed.is_some(), "expand")?;
            reject("trials", a.trials.is_some(), "expand")?;
            reject("n", a.n.is_some(), "expand")?;
            reject("tau", a.tau.is_some(), "expand")?;
            let cfg: ExpandConfig = read_config(&a.config)?;
            let out = a.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
            Ok(cmd_expand(&cfg, &base_dir(&a.config), &out)?.code)
        }
        Command::KernelStudy(a) => {
            let mut cfg: KernelStudyConfig = read_config(&a.config)?;
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            if let Some(t) = a.trials {
                cfg.trials = Some(t);
            }
            if let Some(n) = a.n {
                cfg.n = Some(n);
                cfg.n_sweep = None;
            }
            if let Some(t) = a.tau {
                cfg.tau = t;
            }
            let out = a.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
            Ok(cmd_kernel_study(&cfg, &out)?.code)
        }
        Command::Bounds(a) => {
            reject("seed", a.seed.is_some(), "bounds")?;
            reject("trials", a.trials.is_some(), "bounds")?;
            let mut cfg: BoundsConfig = read_config(&a.config)?;
            if let Some(n) = a.n {
                cfg.n = Some(n);
            }
            if let Some(t) = a.tau {
                cfg.tau = t;
            }
            let (outcome, text) = cmd_bounds(&cfg, a.out.as_deref())?;
            print!("{text}");
            Ok(outcome.code)
        }
    }
}

/// Parses arguments and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT_ERROR } else { exit::SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit::INPUT_ERROR
        }
    }
}
