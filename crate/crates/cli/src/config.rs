//! Experiment configuration: TOML schema, validation, and bundled presets.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use qcnms_core::open_system::SpectralFn;
use qcnms_core::oscillator::{OscillatorParams, TimeGrid};
use qcnms_core::spectrum::{WidthConvention, Window};
use qcnms_core::timescales::ChainTemplate;

use crate::RunError;

/// Named scenario; doubles as the CLI subcommand and the config field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Closed,
    Damped,
    OpenBath,
    Bec,
    Phasediff,
    Estimate,
    Verify,
    Timescales,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Closed => "closed",
            Scenario::Damped => "damped",
            Scenario::OpenBath => "open-bath",
            Scenario::Bec => "bec",
            Scenario::Phasediff => "phasediff",
            Scenario::Estimate => "estimate",
            Scenario::Verify => "verify",
            Scenario::Timescales => "timescales",
        }
    }
}

fn config_err(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

/// Top-level experiment configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oscillator: Option<OscillatorBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comb: Option<CombBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damping: Option<DampingBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bath: Option<BathBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bec: Option<BecBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phasediff: Option<PhaseDiffBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timescales: Option<TimescalesBlock>,
    #[serde(default)]
    pub output: OutputBlock,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, RunError> {
        toml::from_str(text).map_err(|e| config_err(format!("config parse error: {e}")))
    }

    /// The scenario field, when present, must agree with the subcommand.
    pub fn check_scenario(&self, requested: Scenario) -> Result<(), RunError> {
        match self.scenario {
            Some(s) if s != requested => Err(config_err(format!(
                "config declares scenario '{}' but '{}' was requested",
                s.name(),
                requested.name()
            ))),
            _ => Ok(()),
        }
    }

    pub fn oscillator(&self) -> Result<&OscillatorBlock, RunError> {
        self.oscillator
            .as_ref()
            .ok_or_else(|| config_err("missing [oscillator] section"))
    }

    pub fn grid(&self) -> Result<&GridBlock, RunError> {
        self.grid
            .as_ref()
            .ok_or_else(|| config_err("missing [grid] section"))
    }
}

/// How the oscillator parameters are specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OscMode {
    /// `|α|² = 1/ε`, `μ̄ = ε·μ_cl`; needs `epsilon`, `mu_cl`.
    Canonical,
    /// Arbitrary amplitude; needs `epsilon`, `mu_bar`, `alpha_re`.
    Explicit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorBlock {
    pub mode: OscMode,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_cl: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_im: Option<f64>,
}

impl OscillatorBlock {
    pub fn build(&self) -> Result<OscillatorParams<f64>, RunError> {
        match self.mode {
            OscMode::Canonical => {
                let mu_cl = self
                    .mu_cl
                    .ok_or_else(|| config_err("oscillator.mu_cl required in canonical mode"))?;
                OscillatorParams::canonical(self.epsilon, mu_cl, self.alpha_phase.unwrap_or(0.0))
            }
            OscMode::Explicit => {
                let mu_bar = self
                    .mu_bar
                    .ok_or_else(|| config_err("oscillator.mu_bar required in explicit mode"))?;
                let re = self
                    .alpha_re
                    .ok_or_else(|| config_err("oscillator.alpha_re required in explicit mode"))?;
                OscillatorParams::explicit(
                    self.epsilon,
                    mu_bar,
                    Complex::new(re, self.alpha_im.unwrap_or(0.0)),
                )
            }
        }
        .map_err(|e| config_err(format!("oscillator: {e}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    #[serde(default)]
    pub t_start: f64,
    pub dt: f64,
    pub n_samples: usize,
    /// Evaluate the model at `τ − span/2`: a symmetric record around the
    /// collapse. Time shifts leave magnitude spectra untouched, so this is
    /// how Gaussian-type lines are measured without negative grid times.
    #[serde(default)]
    pub center: bool,
}

impl GridBlock {
    pub fn build(&self) -> Result<TimeGrid<f64>, RunError> {
        TimeGrid::new(self.t_start, self.dt, self.n_samples)
            .map_err(|e| config_err(format!("grid: {e}")))
    }

    /// Evaluation-time shift implied by `center`.
    pub fn shift(&self, grid: &TimeGrid<f64>) -> f64 {
        if self.center {
            grid.span() / 2.0
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionName {
    EInverse,
    HalfMax,
}

impl From<ConventionName> for WidthConvention {
    fn from(c: ConventionName) -> Self {
        match c {
            ConventionName::EInverse => WidthConvention::EInverse,
            ConventionName::HalfMax => WidthConvention::HalfMax,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowName {
    Rectangular,
    Hann,
}

impl From<WindowName> for Window {
    fn from(w: WindowName) -> Self {
        match w {
            WindowName::Rectangular => Window::Rectangular,
            WindowName::Hann => Window::Hann,
        }
    }
}

fn default_zero_pad() -> usize {
    4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumBlock {
    #[serde(default = "default_zero_pad")]
    pub zero_pad_factor: usize,
    pub convention: ConventionName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowName>,
}

fn default_tolerance_frac() -> f64 {
    0.1
}

fn default_comb_dt() -> f64 {
    0.5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombBlock {
    /// Defaults to the revival spacing `2μ̄`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_spacing: Option<f64>,
    #[serde(default = "default_tolerance_frac")]
    pub tolerance_frac: f64,
    /// Record length; defaults to four revival times.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_tau: Option<f64>,
    #[serde(default = "default_comb_dt")]
    pub dt: f64,
    #[serde(default = "default_zero_pad")]
    pub zero_pad_factor: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DampingBlock {
    pub gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "kind")]
pub enum SpectralBlock {
    PowerLawExp {
        amplitude: f64,
        exponent: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff_q: Option<f64>,
    },
    Table {
        q: Vec<f64>,
        value: Vec<f64>,
    },
}

impl SpectralBlock {
    pub fn build(&self) -> SpectralFn<f64> {
        match self {
            SpectralBlock::PowerLawExp {
                amplitude,
                exponent,
                cutoff_q,
            } => SpectralFn::PowerLawExp {
                amplitude: *amplitude,
                exponent: *exponent,
                cutoff_q: *cutoff_q,
            },
            SpectralBlock::Table { q, value } => SpectralFn::Table {
                q: q.clone(),
                value: value.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathBlock {
    pub hbar: f64,
    pub k_t: f64,
    pub omega: f64,
    pub volume: f64,
    pub q_max: f64,
    pub dispersion: SpectralBlock,
    pub coupling: SpectralBlock,
}

impl BathBlock {
    pub fn build(&self) -> Result<qcnms_core::BathSpec64, RunError> {
        let bath = qcnms_core::BathSpec64 {
            hbar: self.hbar,
            k_t: self.k_t,
            omega: self.omega,
            volume: self.volume,
            dispersion: self.dispersion.build(),
            coupling: self.coupling.build(),
            q_max: self.q_max,
        };
        bath.validate()
            .map_err(|e| config_err(format!("bath: {e}")))?;
        Ok(bath)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BecBlock {
    pub radius_cm: f64,
    pub cross_section_cm2: f64,
    pub scattering_length_cm: f64,
    pub atom_mass_g: f64,
    pub atom_number: u64,
    #[serde(default)]
    pub mode_index: i32,
    #[serde(default)]
    pub alpha_phase: f64,
}

impl BecBlock {
    pub fn build(&self) -> Result<qcnms_core::BecTorusParams64, RunError> {
        let p = qcnms_core::BecTorusParams64 {
            radius_cm: self.radius_cm,
            cross_section_cm2: self.cross_section_cm2,
            scattering_length_cm: self.scattering_length_cm,
            atom_mass_g: self.atom_mass_g,
            atom_number: self.atom_number,
            mode_index: self.mode_index,
        };
        p.validate().map_err(|e| config_err(format!("bec: {e}")))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseDiffBlock {
    pub atom_number: u64,
    pub xi: f64,
    #[serde(default)]
    pub phi: f64,
    pub t_max: f64,
    pub n_times: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlatformName {
    Generic,
    Cantilever,
    OpticalCavity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateBlock {
    pub platform: PlatformName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_cl: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_levels: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_cav: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_photons: Option<f64>,
}

fn default_seed() -> u64 {
    20260810
}

fn default_n_cases() -> usize {
    50
}

fn default_tail_tol() -> f64 {
    1e-14
}

fn default_alpha_sq_range() -> [f64; 2] {
    [1.0, 2000.0]
}

fn default_mu_bar_range() -> [f64; 2] {
    [1e-4, 1e-1]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_n_cases")]
    pub n_cases: usize,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default = "default_alpha_sq_range")]
    pub alpha_sq_range: [f64; 2],
    #[serde(default = "default_mu_bar_range")]
    pub mu_bar_range: [f64; 2],
}

impl Default for VerifyBlock {
    fn default() -> Self {
        VerifyBlock {
            seed: default_seed(),
            n_cases: default_n_cases(),
            tail_tol: default_tail_tol(),
            alpha_sq_range: default_alpha_sq_range(),
            mu_bar_range: default_mu_bar_range(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainName {
    Relaxation,
    DephasingWindow,
}

impl From<ChainName> for ChainTemplate {
    fn from(c: ChainName) -> Self {
        match c {
            ChainName::Relaxation => ChainTemplate::Relaxation,
            ChainName::DephasingWindow => ChainTemplate::DephasingWindow,
        }
    }
}

fn default_margin() -> f64 {
    0.1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimescalesBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_d: Option<f64>,
    #[serde(default = "default_margin")]
    pub ordering_margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// Output file stem; defaults to the scenario name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Bundled configurations, one per reproducible artifact.
pub const BUNDLED_CONFIGS: &[(&str, &str)] = &[
    ("fig1", include_str!("../configs/fig1.toml")),
    ("fig2", include_str!("../configs/fig2.toml")),
    ("fig3a", include_str!("../configs/fig3a.toml")),
    ("fig3b", include_str!("../configs/fig3b.toml")),
    ("bec-rubidium", include_str!("../configs/bec-rubidium.toml")),
    (
        "phasediff-N100",
        include_str!("../configs/phasediff-N100.toml"),
    ),
    ("verify", include_str!("../configs/verify.toml")),
];

/// Resolve `--config` as a filesystem path first, then as a bundled name.
pub fn resolve_config(arg: &str) -> Result<String, RunError> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| RunError::Io {
            path: path.to_path_buf(),
            detail: e.to_string(),
        });
    }
    for (name, text) in BUNDLED_CONFIGS {
        if *name == arg {
            return Ok((*text).to_string());
        }
    }
    let names: Vec<&str> = BUNDLED_CONFIGS.iter().map(|(n, _)| *n).collect();
    Err(config_err(format!(
        "'{arg}' is neither a readable file nor a bundled config (bundled: {})",
        names.join(", ")
    )))
}
