//! Scenario implementations: each produces data files plus derived values.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qcnms_core::bec;
use qcnms_core::fock::{oracle_alpha, TruncationPolicy};
use qcnms_core::open_system::{
    crossover_with_bath, crossover_with_relaxation, CrossoverReport, DampedParams, WidthRegime,
};
use qcnms_core::oscillator::{alpha_closed_at, OscillatorParams, TimeGrid};
use qcnms_core::phase_diffusion::{
    build_split_state, diffusion_time, evolve_split_state, fit_dispersion_growth, phase_dispersion,
    phase_distribution,
};
use qcnms_core::regime::{estimate_cantilever, estimate_generic, estimate_optical};
use qcnms_core::spectrum::{detect_comb, dft_with, measure_linewidth, LinewidthMeasurement};
use qcnms_core::timescales::{compute_timescales, OrderingOptions};

use crate::config::{
    CombBlock, ExperimentConfig, OutputFormat, PlatformName, SpectrumBlock, VerifyBlock,
};
use crate::export::{
    export_phase_space, export_series, export_spectrum_complex, export_spectrum_magnitude,
    output_path, series_from_values, write_table,
};
use crate::parallel::par_map_ordered;
use crate::RunError;

type C64 = Complex<f64>;

/// Relative difference bound enforced by the verify scenario.
pub const VERIFY_REL_TOL: f64 = 1e-9;

/// Absolute bound for the fixed-parameter oracle spot checks.
pub const VERIFY_SPOT_TOL: f64 = 1e-10;

/// Output sink: directory, file stem, format, and the files written so far.
pub struct Sink<'a> {
    pub dir: &'a Path,
    pub prefix: &'a str,
    pub format: OutputFormat,
    pub files: Vec<String>,
}

impl<'a> Sink<'a> {
    pub fn new(dir: &'a Path, prefix: &'a str, format: OutputFormat) -> Self {
        Sink {
            dir,
            prefix,
            format,
            files: Vec::new(),
        }
    }

    fn path(&mut self, stem: &str) -> PathBuf {
        let p = output_path(self.dir, self.prefix, stem, self.format);
        self.files
            .push(p.file_name().unwrap().to_string_lossy().into_owned());
        p
    }
}

fn numeric(e: qcnms_core::Error) -> RunError {
    RunError::Numeric(e.to_string())
}

fn linewidth_json(m: &LinewidthMeasurement<f64>) -> Value {
    json!({
        "convention": match m.convention {
            qcnms_core::spectrum::WidthConvention::EInverse => "e-inverse",
            qcnms_core::spectrum::WidthConvention::HalfMax => "half-max",
        },
        "peak_freq": m.peak_freq,
        "width": m.width,
        "interpolated": m.interpolated,
    })
}

fn crossover_json(c: &CrossoverReport<f64>) -> Value {
    json!({
        "dominant": match c.dominant {
            WidthRegime::QuantumWidth => "quantum-width",
            WidthRegime::EnvironmentWidth => "environment-width",
        },
        "tau_hbar": c.tau_hbar,
        "tau_env": c.tau_env,
        "margin": c.margin,
    })
}

fn timescales_json(cfg: &ExperimentConfig, params: &OscillatorParams<f64>) -> Value {
    let mut opts = OrderingOptions::default();
    if let Some(ts) = &cfg.timescales {
        opts.tau_gamma = ts.tau_gamma;
        opts.tau_d = ts.tau_d;
        opts.margin = ts.ordering_margin;
        if let Some(chain) = ts.chain {
            opts.chain = chain.into();
        }
    }
    match compute_timescales(params, &opts) {
        Ok(r) => json!({
            "tau_cl": r.tau_cl,
            "tau_hbar": r.tau_hbar,
            "tau_r": r.tau_r,
            "tau_gamma": r.tau_gamma,
            "tau_d": r.tau_d,
            "delta_nu_hbar": r.delta_nu_hbar,
            "theta": r.theta,
            "mesoscopic": r.mesoscopic,
        }),
        Err(_) => Value::Null,
    }
}

/// Momentum record of a trajectory evaluated at `τ − shift` over the grid.
fn momentum_record(
    grid: &TimeGrid<f64>,
    shift: f64,
    alpha_at: impl Fn(f64) -> Result<C64, RunError>,
) -> Result<(Vec<C64>, Vec<f64>), RunError> {
    let mut values = Vec::with_capacity(grid.n_samples());
    for tau in grid.times() {
        values.push(alpha_at(tau - shift)?);
    }
    let momentum = values.iter().map(|v| 2.0f64.sqrt() * v.im).collect();
    Ok((values, momentum))
}

/// Spectrum pipeline: export, then measure the configured linewidth.
fn spectrum_stage(
    sink: &mut Sink,
    block: &SpectrumBlock,
    momentum: &[f64],
    grid: &TimeGrid<f64>,
) -> Result<Value, RunError> {
    let complex: Vec<C64> = momentum.iter().map(|&p| C64::new(p, 0.0)).collect();
    let window = block
        .window
        .map(Into::into)
        .unwrap_or(qcnms_core::spectrum::Window::Rectangular);
    let spec = dft_with(&complex, grid, block.zero_pad_factor, window).map_err(numeric)?;
    export_spectrum_magnitude(&sink.path("spectrum_mag"), &spec, sink.format)?;
    export_spectrum_complex(&sink.path("spectrum_complex"), &spec, sink.format)?;
    let m = measure_linewidth(&spec, block.convention.into()).map_err(numeric)?;
    Ok(linewidth_json(&m))
}

/// Comb pipeline on a dedicated causal record.
fn comb_stage(
    sink: &mut Sink,
    block: &CombBlock,
    mu_bar: f64,
    alpha_at: impl Fn(f64) -> Result<C64, RunError>,
) -> Result<Value, RunError> {
    let expected = block.expected_spacing.unwrap_or(2.0 * mu_bar);
    let record = block.record_tau.unwrap_or(4.0 * PI / mu_bar);
    let n = (record / block.dt).round() as usize + 1;
    let grid =
        TimeGrid::new(0.0, block.dt, n).map_err(|e| RunError::Config(format!("comb grid: {e}")))?;
    let (_, momentum) = momentum_record(&grid, 0.0, alpha_at)?;
    let complex: Vec<C64> = momentum.iter().map(|&p| C64::new(p, 0.0)).collect();
    let spec = dft_with(
        &complex,
        &grid,
        block.zero_pad_factor,
        qcnms_core::spectrum::Window::Rectangular,
    )
    .map_err(numeric)?;
    let lines = detect_comb(&spec, expected, block.tolerance_frac * expected).map_err(numeric)?;
    write_table(
        &sink.path("comb_lines"),
        &["nu"],
        lines.iter().map(|&nu| vec![nu]),
        sink.format,
    )?;
    let median_spacing = if lines.len() >= 2 {
        let mut spacings: Vec<f64> = lines.windows(2).map(|w| w[1] - w[0]).collect();
        spacings.sort_by(f64::total_cmp);
        Some(spacings[spacings.len() / 2])
    } else {
        None
    };
    Ok(json!({
        "expected_spacing": expected,
        "tolerance": block.tolerance_frac * expected,
        "record_tau": record,
        "line_count": lines.len(),
        "median_spacing": median_spacing,
    }))
}

pub fn run_closed(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Value, RunError> {
    let params = cfg.oscillator()?.build()?;
    let grid_block = cfg.grid()?;
    let grid = grid_block.build()?;
    let shift = grid_block.shift(&grid);

    let (values, momentum) = momentum_record(&grid, shift, |t| Ok(alpha_closed_at(&params, t)))?;
    let series = series_from_values(grid, values);
    export_series(&sink.path("series"), &series, sink.format)?;
    export_phase_space(&sink.path("phase_space"), &series, sink.format)?;

    let mut derived = json!({
        "timescales": timescales_json(cfg, &params),
        "record_shift": shift,
    });
    if let Some(block) = &cfg.spectrum {
        derived["linewidth"] = spectrum_stage(sink, block, &momentum, &grid)?;
    }
    if let Some(block) = &cfg.comb {
        derived["comb"] = comb_stage(sink, block, params.mu_bar(), |t| {
            Ok(alpha_closed_at(&params, t))
        })?;
    }
    Ok(derived)
}

pub fn run_damped(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Value, RunError> {
    let params = cfg.oscillator()?.build()?;
    let gamma = cfg
        .damping
        .as_ref()
        .ok_or_else(|| RunError::Config("missing [damping] section".into()))?
        .gamma;
    let damped = DampedParams::new(params, gamma).map_err(numeric)?;
    let grid_block = cfg.grid()?;
    let grid = grid_block.build()?;
    let shift = grid_block.shift(&grid);

    let at = |t: f64| Ok(qcnms_core::open_system::alpha_damped_at(&damped, t));
    let (values, momentum) = momentum_record(&grid, shift, at)?;
    let series = series_from_values(grid, values);
    export_series(&sink.path("series"), &series, sink.format)?;
    export_phase_space(&sink.path("phase_space"), &series, sink.format)?;

    let mut derived = json!({
        "gamma": gamma,
        "tau_gamma": damped.tau_gamma(),
        "timescales": timescales_json(cfg, &params),
        "record_shift": shift,
    });
    if gamma > 0.0 {
        let crossover = crossover_with_relaxation(&params, gamma, None).map_err(numeric)?;
        derived["crossover"] = crossover_json(&crossover);
    }
    if let Some(block) = &cfg.spectrum {
        derived["linewidth"] = spectrum_stage(sink, block, &momentum, &grid)?;
    }
    if let Some(block) = &cfg.comb {
        derived["comb"] = comb_stage(sink, block, params.mu_bar(), at)?;
    }
    Ok(derived)
}

pub fn run_open_bath(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Value, RunError> {
    let params = cfg.oscillator()?.build()?;
    let bath = cfg
        .bath
        .as_ref()
        .ok_or_else(|| RunError::Config("missing [bath] section".into()))?
        .build()?;
    let grid_block = cfg.grid()?;
    let grid = grid_block.build()?;
    let shift = grid_block.shift(&grid);

    let mut attenuations = Vec::with_capacity(grid.n_samples());
    for tau in grid.times() {
        attenuations.push(bath.attenuation(tau - shift).map_err(numeric)?);
    }
    let values: Vec<C64> = grid
        .times()
        .zip(&attenuations)
        .map(|(tau, r)| alpha_closed_at(&params, tau - shift) * r)
        .collect();
    let momentum: Vec<f64> = values.iter().map(|v| 2.0f64.sqrt() * v.im).collect();
    let series = series_from_values(grid, values);
    export_series(&sink.path("series"), &series, sink.format)?;

    let atten_rows = grid
        .times()
        .zip(&attenuations)
        .map(|(tau, r)| vec![tau, -(r.norm().ln()), r.arg()]);
    write_table(
        &sink.path("attenuation"),
        &["tau", "gamma_exact", "phase"],
        atten_rows,
        sink.format,
    )?;

    let tau_d = bath.gamma_classical().map_err(numeric)?;
    let crossover = crossover_with_bath(&params, &bath, None).map_err(numeric)?;
    let mut derived = json!({
        "tau_d": tau_d,
        "phase_drift_per_tau": bath.phase_drift_classical(1.0).map_err(numeric)?,
        "crossover": crossover_json(&crossover),
        "timescales": timescales_json(cfg, &params),
        "record_shift": shift,
    });
    if let Some(block) = &cfg.spectrum {
        derived["linewidth"] = spectrum_stage(sink, block, &momentum, &grid)?;
    }
    Ok(derived)
}

pub fn run_bec(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Value, RunError> {
    let block = cfg
        .bec
        .as_ref()
        .ok_or_else(|| RunError::Config("missing [bec] section".into()))?;
    let torus = block.build()?;
    let state = bec::BecModeState::from_torus(&torus, block.alpha_phase).map_err(numeric)?;
    let grid = cfg.grid()?.build()?;
    let k = torus.mode_index;

    let exact = bec::evolve_single_mode(&state, k, &grid);
    let gp = bec::evolve_gp(&state, k, &grid);
    export_series(&sink.path("series"), &exact, sink.format)?;
    export_series(&sink.path("gp_series"), &gp, sink.format)?;

    let (tau_hbar, tau_r) = bec::bec_timescales(&state).map_err(numeric)?;
    let physical = bec::t_hbar_physical(&torus).map_err(numeric)?;
    // checked at the collapse scale, where the amplitude is still alive
    let residual =
        bec::bec_pde_residual(&state, k, tau_hbar.min(grid.span()), 1e-3).map_err(numeric)?;
    Ok(json!({
        "epsilon_int": state.epsilon_int(),
        "tau_hbar": tau_hbar,
        "tau_r": tau_r,
        "t_hbar_seconds": physical.t_hbar_seconds,
        "bandwidth_hz": physical.bandwidth_hz,
        "transport_residual_mid_record": residual,
    }))
}

pub fn run_phasediff(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Value, RunError> {
    let block = cfg
        .phasediff
        .as_ref()
        .ok_or_else(|| RunError::Config("missing [phasediff] section".into()))?;
    if block.n_times < 2 {
        return Err(RunError::Config(
            "phasediff.n_times must be at least 2".into(),
        ));
    }
    if !(block.t_max > 0.0) {
        return Err(RunError::Config("phasediff.t_max must be positive".into()));
    }
    let state = build_split_state(block.atom_number, block.phi).map_err(numeric)?;

    let mut times = Vec::with_capacity(block.n_times);
    let mut dispersions = Vec::with_capacity(block.n_times);
    for i in 0..block.n_times {
        let t = block.t_max * i as f64 / (block.n_times - 1) as f64;
        let evolved = evolve_split_state(&state, block.xi, t);
        times.push(t);
        dispersions.push(phase_dispersion(&phase_distribution(&evolved)));
    }
    write_table(
        &sink.path("dispersion"),
        &["t", "delta_phi_sq"],
        times.iter().zip(&dispersions).map(|(&t, &v)| vec![t, v]),
        sink.format,
    )?;

    for (i, &t) in block.snapshot_times.iter().enumerate() {
        let dist = phase_distribution(&evolve_split_state(&state, block.xi, t));
        write_table(
            &sink.path(&format!("phase_dist_{i}")),
            &["phi", "p"],
            dist.phases()
                .iter()
                .zip(dist.probabilities())
                .map(|(&phi, &p)| vec![phi, p]),
            sink.format,
        )?;
    }

    let (slope, intercept) = fit_dispersion_growth(&times, &dispersions).map_err(numeric)?;
    let n = block.atom_number as f64;
    // ξ = 2μ̄ links the split evolution to the oscillator time-scales
    let t_diff = diffusion_time(block.xi / 2.0, n).map_err(numeric)?;
    Ok(json!({
        "slope": slope,
        "intercept": intercept,
        "expected_slope": n * block.xi * block.xi,
        "expected_intercept": 1.0 / n,
        "rate": n.sqrt() * block.xi,
        "diffusion_time": t_diff,
    }))
}

pub fn run_estimate(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Value, RunError> {
    let block = cfg
        .estimate
        .as_ref()
        .ok_or_else(|| RunError::Config("missing [estimate] section".into()))?;
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| RunError::Config(format!("estimate.{name} required for this platform")))
    };
    let estimate = match block.platform {
        PlatformName::Generic => estimate_generic(
            need(block.mu_cl, "mu_cl")?,
            need(block.epsilon, "epsilon")?,
            need(block.tau_gamma, "tau_gamma")?,
            block.threshold,
        ),
        PlatformName::Cantilever => estimate_cantilever(
            need(block.mu_cl, "mu_cl")?,
            need(block.n_levels, "n_levels")?,
            need(block.q_factor, "q_factor")?,
            block.threshold,
        ),
        PlatformName::OpticalCavity => estimate_optical(
            need(block.chi, "chi")?,
            need(block.action, "action")?,
            need(block.omega_cav, "omega_cav")?,
            need(block.n_photons, "n_photons")?,
            need(block.tau_gamma, "tau_gamma")?,
            block.threshold,
        ),
    }
    .map_err(numeric)?;

    write_table(
        &sink.path("estimate"),
        &["theta", "threshold", "satisfied"],
        std::iter::once(vec![
            estimate.theta,
            estimate.threshold,
            if estimate.satisfied { 1.0 } else { 0.0 },
        ]),
        sink.format,
    )?;
    let inputs: serde_json::Map<String, Value> = estimate
        .inputs
        .iter()
        .map(|(k, v)| ((*k).to_string(), json!(v)))
        .collect();
    Ok(json!({
        "platform": match estimate.platform {
            qcnms_core::regime::Platform::Generic => "generic",
            qcnms_core::regime::Platform::Cantilever => "cantilever",
            qcnms_core::regime::Platform::OpticalCavity => "optical-cavity",
        },
        "theta": estimate.theta,
        "threshold": estimate.threshold,
        "satisfied": estimate.satisfied,
        "inputs": inputs,
    }))
}

struct VerifyCase {
    alpha_sq: f64,
    mu_bar: f64,
    phase: f64,
    tau: f64,
}

pub fn run_verify(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Value, RunError> {
    let block = cfg.verify.clone().unwrap_or_default();
    validate_verify(&block)?;

    // fixed-parameter spot checks at the collapse-figure parameters
    let fig2 = OscillatorParams::canonical(1.0 / 900.0, 1.0, 0.0).map_err(numeric)?;
    let policy = TruncationPolicy::adaptive(block.tail_tol);
    let mut fig2_max: f64 = 0.0;
    for tau in [1.0, 15.0, 100.0] {
        let diff = (oracle_alpha(&fig2, tau, &policy).map_err(numeric)?
            - alpha_closed_at(&fig2, tau))
        .norm();
        fig2_max = fig2_max.max(diff);
    }
    if fig2_max >= VERIFY_SPOT_TOL {
        return Err(RunError::Numeric(format!(
            "oracle spot check failed: |closed - oracle| = {fig2_max:e} >= {VERIFY_SPOT_TOL:e}"
        )));
    }

    // seeded random sweep; sampling is sequential, evaluation parallel
    let mut rng = ChaCha8Rng::seed_from_u64(block.seed);
    let [a_lo, a_hi] = block.alpha_sq_range;
    let [m_lo, m_hi] = block.mu_bar_range;
    let cases: Vec<VerifyCase> = (0..block.n_cases)
        .map(|_| {
            let alpha_sq = rng.random_range(a_lo..a_hi);
            let mu_bar = (rng.random_range(m_lo.ln()..m_hi.ln())).exp();
            let phase = rng.random_range(0.0..2.0 * PI);
            let tau_r = PI / mu_bar;
            let tau = rng.random_range(0.0..2.0 * tau_r);
            VerifyCase {
                alpha_sq,
                mu_bar,
                phase,
                tau,
            }
        })
        .collect();

    let tail_tol = block.tail_tol;
    let results: Vec<Result<Vec<f64>, RunError>> = par_map_ordered(cases, move |c| {
        let alpha = Complex::from_polar(c.alpha_sq.sqrt(), c.phase);
        let params = OscillatorParams::explicit(c.mu_bar, c.mu_bar, alpha).map_err(numeric)?;
        let policy = TruncationPolicy::adaptive(tail_tol);
        let oracle = oracle_alpha(&params, c.tau, &policy).map_err(numeric)?;
        let closed = alpha_closed_at(&params, c.tau);
        let abs_diff = (oracle - closed).norm();
        Ok(vec![
            c.alpha_sq,
            c.mu_bar,
            c.phase,
            c.tau,
            abs_diff,
            abs_diff / params.alpha_abs(),
        ])
    });

    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        rows.push(r?);
    }
    let max_abs = rows.iter().map(|r| r[4]).fold(0.0f64, f64::max);
    let max_rel = rows.iter().map(|r| r[5]).fold(0.0f64, f64::max);
    write_table(
        &sink.path("oracle_cases"),
        &[
            "alpha_sq",
            "mu_bar",
            "alpha_phase",
            "tau",
            "abs_diff",
            "rel_diff",
        ],
        rows.into_iter(),
        sink.format,
    )?;
    if max_rel >= VERIFY_REL_TOL {
        return Err(RunError::Numeric(format!(
            "oracle sweep failed: max |closed - oracle|/|alpha| = {max_rel:e} >= {VERIFY_REL_TOL:e}"
        )));
    }
    Ok(json!({
        "seed": block.seed,
        "n_cases": block.n_cases,
        "tail_tol": block.tail_tol,
        "fig2_max_abs_diff": fig2_max,
        "sweep_max_abs_diff": max_abs,
        "sweep_max_rel_diff": max_rel,
        "rel_tolerance": VERIFY_REL_TOL,
        "spot_tolerance": VERIFY_SPOT_TOL,
    }))
}

fn validate_verify(block: &VerifyBlock) -> Result<(), RunError> {
    let [a_lo, a_hi] = block.alpha_sq_range;
    let [m_lo, m_hi] = block.mu_bar_range;
    if block.n_cases == 0 {
        return Err(RunError::Config("verify.n_cases must be positive".into()));
    }
    if !(a_lo > 0.0 && a_hi > a_lo) || !(m_lo > 0.0 && m_hi > m_lo) {
        return Err(RunError::Config(
            "verify ranges must be positive with hi > lo".into(),
        ));
    }
    if !(block.tail_tol > 0.0 && block.tail_tol < 1.0) {
        return Err(RunError::Config(
            "verify.tail_tol must lie in (0, 1)".into(),
        ));
    }
    Ok(())
}

pub fn run_timescales(cfg: &ExperimentConfig, _sink: &mut Sink) -> Result<Value, RunError> {
    let params = cfg.oscillator()?.build()?;
    let report = timescales_json(cfg, &params);
    if report.is_null() {
        return Err(RunError::Numeric(
            "time-scales undefined for these parameters (mu_bar <= 0 or |alpha| = 0)".into(),
        ));
    }
    Ok(json!({ "timescales": report }))
}
