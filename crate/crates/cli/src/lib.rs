//! Configuration-driven experiment runner around `qcnms-core`.
//!
//! A run takes one [`config::Scenario`], a TOML [`config::ExperimentConfig`]
//! (from a file or a bundled preset), and an output directory; it writes the
//! scenario's data tables plus a JSON manifest and returns the manifest.
//! Identical configs produce byte-identical data files; the manifest's
//! wall-clock duration is the only varying field.

// validation guards use negated comparisons so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

pub mod config;
pub mod export;
pub mod parallel;
pub mod scenarios;

use config::{ExperimentConfig, Scenario};
use scenarios::Sink;

/// Failure modes with their process exit codes.
#[derive(Debug, Clone, Error)]
pub enum RunError {
    /// Invalid or inconsistent configuration (exit code 2).
    #[error("config error: {0}")]
    Config(String),
    /// Numeric failure inside the library (exit code 3).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Filesystem failure (exit code 1).
    #[error("io error on {path}: {detail}")]
    Io {
        path: std::path::PathBuf,
        detail: String,
    },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numeric(_) => 3,
            RunError::Io { .. } => 1,
        }
    }
}

/// Record of a completed run, serialized next to the data files.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub scenario: String,
    pub version: String,
    pub duration_seconds: f64,
    pub outputs: Vec<String>,
    pub derived: serde_json::Value,
    pub config: ExperimentConfig,
}

/// Execute a scenario and write its outputs under `out_dir`.
pub fn run(
    scenario: Scenario,
    cfg: &ExperimentConfig,
    out_dir: &Path,
) -> Result<RunManifest, RunError> {
    // the time-scale report is a read-only view of the oscillator block and
    // may be requested against any config
    if scenario != Scenario::Timescales {
        cfg.check_scenario(scenario)?;
    }
    std::fs::create_dir_all(out_dir).map_err(|e| RunError::Io {
        path: out_dir.to_path_buf(),
        detail: e.to_string(),
    })?;

    let prefix = cfg
        .output
        .prefix
        .clone()
        .unwrap_or_else(|| scenario.name().to_string());
    let started = Instant::now();
    let mut sink = Sink::new(out_dir, &prefix, cfg.output.format);

    let derived = match scenario {
        Scenario::Closed => scenarios::run_closed(cfg, &mut sink)?,
        Scenario::Damped => scenarios::run_damped(cfg, &mut sink)?,
        Scenario::OpenBath => scenarios::run_open_bath(cfg, &mut sink)?,
        Scenario::Bec => scenarios::run_bec(cfg, &mut sink)?,
        Scenario::Phasediff => scenarios::run_phasediff(cfg, &mut sink)?,
        Scenario::Estimate => scenarios::run_estimate(cfg, &mut sink)?,
        Scenario::Verify => scenarios::run_verify(cfg, &mut sink)?,
        Scenario::Timescales => scenarios::run_timescales(cfg, &mut sink)?,
    };

    let manifest = RunManifest {
        scenario: scenario.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration_seconds: started.elapsed().as_secs_f64(),
        outputs: sink.files,
        derived,
        config: cfg.clone(),
    };

    for name in &manifest.outputs {
        let p = out_dir.join(name);
        if !p.is_file() {
            return Err(RunError::Io {
                path: p,
                detail: "declared output file missing after run".into(),
            });
        }
    }

    let manifest_path = out_dir.join(format!("{prefix}_manifest.json"));
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| RunError::Io {
        path: manifest_path.clone(),
        detail: e.to_string(),
    })?;
    std::fs::write(&manifest_path, text + "\n").map_err(|e| RunError::Io {
        path: manifest_path,
        detail: e.to_string(),
    })?;

    Ok(manifest)
}
