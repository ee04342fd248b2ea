//! Experiment runner behind the `entscale` binary.
//!
//! A run is a [`RunConfig`] (config file plus command-line overrides, with
//! defaults filled in and every grid range-checked) handed to [`run`], which
//! computes a CSV body and writes it next to a JSON envelope:
//!
//! ```text
//! out.csv   header line + one row per sample, 17 significant digits
//! out.json  {"header": {tool, version, experiment, config, seed, wall_time_s},
//!            "summary": {...fits and pass flags...}}
//! ```
//!
//! The `config` field of the envelope is itself a valid config file, so any
//! report can be regenerated from its own header.

pub mod config;
pub mod experiments;
pub mod grid;
pub mod report;
pub mod settings;
pub mod suite;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

pub use config::{normalize, ConfigError, ConfigFile};
pub use experiments::{execute, Cell, Outcome, Table};
pub use report::{envelope_path, Envelope, Header};
pub use settings::{Model, Overrides, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    Quench,
    WHierarchy,
    Lightcone,
    KCheck,
    Quasilocal,
    FermionScaling,
    RingCheck,
    PropertySuite,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Quench,
        Experiment::WHierarchy,
        Experiment::Lightcone,
        Experiment::KCheck,
        Experiment::Quasilocal,
        Experiment::FermionScaling,
        Experiment::RingCheck,
        Experiment::PropertySuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Quench => "quench",
            Experiment::WHierarchy => "w-hierarchy",
            Experiment::Lightcone => "lightcone",
            Experiment::KCheck => "kcheck",
            Experiment::Quasilocal => "quasilocal",
            Experiment::FermionScaling => "fermion-scaling",
            Experiment::RingCheck => "ring-check",
            Experiment::PropertySuite => "property-suite",
        }
    }

    /// CSV header of the report body.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Experiment::Quench => &["t", "m", "S", "sMax", "effRank"],
            Experiment::WHierarchy => &["l", "wDeviation", "lrBound"],
            Experiment::Lightcone => &["t", "d", "commNorm"],
            Experiment::KCheck => &["t", "spectrumMaxDiff", "groundFidelity", "firstOrderResidual"],
            Experiment::Quasilocal => &["t", "k", "truncNorm"],
            Experiment::FermionScaling => &["m", "S_exact", "D_det", "logAbsDet"],
            Experiment::RingCheck => &["n", "m", "maxDeviation"],
            Experiment::PropertySuite => &["check", "size", "trials", "violations", "worst", "tolerance"],
        }
    }

    pub fn is_spin(self) -> bool {
        matches!(
            self,
            Experiment::Quench | Experiment::WHierarchy | Experiment::Lightcone | Experiment::KCheck | Experiment::Quasilocal
        )
    }

    pub fn is_fermion(self) -> bool {
        matches!(self, Experiment::FermionScaling | Experiment::RingCheck)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
            format!("unknown experiment `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("numerical failure: {0}")]
    Numerical(#[from] entscale_core::Error),

    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl RunError {
    /// 1 for anything rejected before computing, 2 for failures after.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Numerical(_) | RunError::Output { .. } => 2,
        }
    }
}

/// Computes the experiment and writes `out` plus its JSON envelope. Nothing
/// is left on disk when any step fails.
pub fn run(cfg: &RunConfig, out: &Path) -> Result<Envelope, RunError> {
    let sidecar = envelope_path(out)?;
    let start = Instant::now();
    let outcome = execute(cfg)?;
    let envelope = Envelope {
        header: Header {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            experiment: cfg.experiment.name().to_string(),
            config: cfg.echo(),
            seed: cfg.seed,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
        summary: outcome.summary,
    };
    report::write_outputs(out, &sidecar, &outcome.table.to_csv(), &envelope)?;
    Ok(envelope)
}
