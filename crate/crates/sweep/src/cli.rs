//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

use crate::config::{load_config_with, ConfigError, Settings, SweepSpec};
use crate::output::{render, write_atomic};
use crate::sweep::{run_sweep, SweepError};

/// Sweep probabilities, Fisher information and quantum Fisher information over a
/// detuning grid.
#[derive(Debug, Parser)]
#[command(name = "clock-sweep", version)]
pub struct Cli {
    /// Interrogation scheme: rabi, ramsey or cpt (may also come from --config)
    pub scheme: Option<String>,
    /// Dimensionless detuning grid as start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Rabi frequency (rabi, ramsey)
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: Option<String>,
    /// Free-evolution time in units of the pulse length (ramsey)
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Field phase in radians (rabi, ramsey)
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Ground-coherence relaxation rate in s^-1 (cpt)
    #[arg(long, allow_hyphen_values = true)]
    pub gamma2: Option<String>,
    /// Optical relaxation rate in s^-1 (cpt)
    #[arg(long = "gamma-star", allow_hyphen_values = true)]
    pub gamma_star: Option<String>,
    /// Pumping rate in s^-1 (cpt)
    #[arg(long = "gamma-p", allow_hyphen_values = true)]
    pub gamma_p: Option<String>,
    /// Measurement basis: coupled, energy or single:<C|NC|1|2|3> (cpt)
    #[arg(long)]
    pub basis: Option<String>,
    /// Comma-separated subset of prob, fisher, qfi, populations
    #[arg(long)]
    pub quantities: Option<String>,
    /// Output format: csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Output file (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key = value file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Cli {
    /// Flag values as settings, keyed like the configuration file.
    pub fn settings(&self) -> Result<Settings, ConfigError> {
        let mut s = Settings::new();
        let out = self.out.as_ref().map(|p| p.to_string_lossy().into_owned());
        let pairs = [
            ("scheme", &self.scheme),
            ("grid", &self.grid),
            ("omega0", &self.omega0),
            ("kappa", &self.kappa),
            ("phi", &self.phi),
            ("gamma2", &self.gamma2),
            ("gamma-star", &self.gamma_star),
            ("gamma-p", &self.gamma_p),
            ("basis", &self.basis),
            ("quantities", &self.quantities),
            ("format", &self.format),
            ("out", &out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v.clone())?;
            }
        }
        Ok(s)
    }

    pub fn spec(&self) -> Result<SweepSpec, ConfigError> {
        let flags = self.settings()?;
        match &self.config {
            Some(path) => load_config_with(path, &flags),
            None => SweepSpec::from_settings(&flags),
        }
    }
}

/// Runs the sweep described by `cli`, writing to `--out` or to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<SweepSpec, CliError> {
    let spec = cli.spec()?;
    let table = run_sweep(&spec)?;
    if table.singular_points > 0 {
        eprintln!(
            "warning: {} grid point(s) had an unresolved 0/0 Fisher term",
            table.singular_points
        );
    }
    let text = render(&spec, &table);
    match &spec.out {
        Some(path) => write_atomic(path, &text).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })?,
        None => stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            })?,
    }
    Ok(spec)
}
