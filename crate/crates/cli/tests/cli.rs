//! Integration tests for config handling, exporters, scenarios, and the
//! binary's exit codes.

use std::path::Path;
use std::process::Command;

use qcnms_cli::config::{resolve_config, ExperimentConfig, OutputFormat, Scenario};
use qcnms_cli::export::{parse_csv, write_table};
use qcnms_cli::{run, RunError};

fn parse(text: &str) -> ExperimentConfig {
    ExperimentConfig::parse(text).expect("valid config")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|_| panic!("missing {name}"))
}

#[test]
fn bundled_configs_resolve_and_parse() {
    for name in [
        "fig1",
        "fig2",
        "fig3a",
        "fig3b",
        "bec-rubidium",
        "phasediff-N100",
        "verify",
    ] {
        let text = resolve_config(name).expect("bundled config");
        let cfg = parse(&text);
        assert!(cfg.scenario.is_some(), "{name} should declare its scenario");
    }
    assert!(matches!(
        resolve_config("no-such-config"),
        Err(RunError::Config(_))
    ));
}

#[test]
fn unknown_fields_are_rejected() {
    let err = ExperimentConfig::parse("typo_field = 1\n").unwrap_err();
    assert!(matches!(err, RunError::Config(_)), "{err}");
    let err =
        ExperimentConfig::parse("[oscillator]\nmode = \"canonical\"\nepsilon = 0.01\nbogus = 2\n")
            .unwrap_err();
    assert!(matches!(err, RunError::Config(_)));
}

#[test]
fn scenario_mismatch_is_a_config_error() {
    let cfg = parse("scenario = \"closed\"\n");
    let err = cfg.check_scenario(Scenario::Damped).unwrap_err();
    assert!(matches!(err, RunError::Config(_)));
    cfg.check_scenario(Scenario::Closed).unwrap();
}

#[test]
fn oscillator_block_validation() {
    let cfg = parse("[oscillator]\nmode = \"canonical\"\nepsilon = 0.01\n");
    assert!(cfg.oscillator().unwrap().build().is_err(), "mu_cl missing");
    let cfg = parse("[oscillator]\nmode = \"explicit\"\nepsilon = 0.01\nmu_bar = 0.01\n");
    assert!(
        cfg.oscillator().unwrap().build().is_err(),
        "alpha_re missing"
    );
    let cfg = parse(
        "[oscillator]\nmode = \"explicit\"\nepsilon = 0.01\nmu_bar = 0.01\nalpha_re = 10.0\n",
    );
    let p = cfg.oscillator().unwrap().build().unwrap();
    assert!((p.mu_cl() - 1.0).abs() < 1e-12);
}

#[test]
fn csv_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let rows = vec![
        vec![0.1, -2.756e-101, 1.0 / 3.0],
        vec![f64::MIN_POSITIVE, 1.443e-22, 9.87654321e8],
    ];
    write_table(
        &path,
        &["a", "b", "c"],
        rows.clone().into_iter(),
        OutputFormat::Csv,
    )
    .unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed = parse_csv(&text);
    assert_eq!(parsed.len(), rows.len());
    for (got, want) in parsed.iter().zip(&rows) {
        for (g, w) in got.iter().zip(want) {
            assert_eq!(g.to_bits(), w.to_bits(), "{g} vs {w}");
        }
    }
}

#[test]
fn empty_table_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    write_table(
        &path,
        &["tau", "re", "im"],
        std::iter::empty(),
        OutputFormat::Csv,
    )
    .unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "tau,re,im\n");
}

#[test]
fn jsonl_rows_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    write_table(
        &path,
        &["tau", "re"],
        vec![vec![0.25, -3.5]].into_iter(),
        OutputFormat::Jsonl,
    )
    .unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["tau"], 0.25);
    assert_eq!(v["re"], -3.5);
}

#[test]
fn closed_run_writes_declared_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse(
        r#"
scenario = "closed"
[oscillator]
mode = "canonical"
epsilon = 0.01
mu_cl = 1.0
[grid]
dt = 0.05
n_samples = 128
[spectrum]
convention = "e-inverse"
[output]
prefix = "smoke"
"#,
    );
    let manifest = run(Scenario::Closed, &cfg, dir.path()).unwrap();
    assert_eq!(manifest.scenario, "closed");
    for name in &manifest.outputs {
        assert!(dir.path().join(name).is_file(), "{name} should exist");
    }
    assert!(dir.path().join("smoke_manifest.json").is_file());
    let series = read(dir.path(), "smoke_series.csv");
    assert_eq!(parse_csv(&series).len(), 128);
    // spectrum block ran: both exports plus a measured linewidth
    assert!(manifest.outputs.iter().any(|f| f.contains("spectrum_mag")));
    assert!(manifest.derived["linewidth"]["width"].as_f64().unwrap() > 0.0);
}

#[test]
fn jsonl_output_format_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse(
        r#"
[oscillator]
mode = "canonical"
epsilon = 0.01
mu_cl = 1.0
[grid]
dt = 0.05
n_samples = 64
[output]
prefix = "smoke"
format = "jsonl"
"#,
    );
    let manifest = run(Scenario::Closed, &cfg, dir.path()).unwrap();
    assert!(manifest.outputs.contains(&"smoke_series.jsonl".to_string()));
    let first_line = read(dir.path(), "smoke_series.jsonl")
        .lines()
        .next()
        .unwrap()
        .to_string();
    let v: serde_json::Value = serde_json::from_str(&first_line).unwrap();
    assert_eq!(v["tau"], 0.0);
}

#[test]
fn open_bath_scenario_reports_decoherence_time() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse(
        r#"
scenario = "open-bath"
[oscillator]
mode = "canonical"
epsilon = 0.0011111111111111111
mu_cl = 1.0
[grid]
dt = 0.02
n_samples = 256
[bath]
hbar = 0.001
k_t = 1.0
omega = 1.0
volume = 7.8956835208714865e10   # 2*pi^2*4e9
q_max = 12.0
[bath.dispersion]
kind = "power-law-exp"
amplitude = 170.0
exponent = 1.0
[bath.coupling]
kind = "power-law-exp"
amplitude = 1.0
exponent = 0.0
cutoff_q = 1.0
[output]
prefix = "bath"
"#,
    );
    let manifest = run(Scenario::OpenBath, &cfg, dir.path()).unwrap();
    let tau_d = manifest.derived["tau_d"].as_f64().unwrap();
    assert!((tau_d - 3.801e-3).abs() < 1e-5, "tau_d = {tau_d}");
    // tau_d << tau_hbar here, so the environment dominates
    assert_eq!(
        manifest.derived["crossover"]["dominant"],
        serde_json::json!("environment-width")
    );
    let atten = read(dir.path(), "bath_attenuation.csv");
    let rows = parse_csv(&atten);
    assert_eq!(rows.len(), 256);
    // Γ(0) = 0 and Γ grows
    assert!(rows[0][1].abs() < 1e-12);
    assert!(rows[100][1] > 0.0);
}

#[test]
fn estimate_scenarios_cover_all_platforms() {
    let dir = tempfile::tempdir().unwrap();
    let generic = parse(
        r#"
[estimate]
platform = "generic"
mu_cl = 1.0
epsilon = 0.0011111111111111111
tau_gamma = 2000.0
"#,
    );
    let m = run(Scenario::Estimate, &generic, dir.path()).unwrap();
    let theta = m.derived["theta"].as_f64().unwrap();
    assert!((theta - 133.33333333333334).abs() < 1e-9);
    assert_eq!(m.derived["satisfied"], serde_json::json!(true));

    let cantilever = parse(
        r#"
[estimate]
platform = "cantilever"
mu_cl = 1.0
n_levels = 1e6
q_factor = 1e5
[output]
prefix = "cant"
"#,
    );
    let m = run(Scenario::Estimate, &cantilever, dir.path()).unwrap();
    assert!((m.derived["theta"].as_f64().unwrap() - 400.0).abs() < 1e-9);

    let optical = parse(
        r#"
[estimate]
platform = "optical-cavity"
chi = 2.0
action = 1.0
omega_cav = 2.0
n_photons = 900.0
tau_gamma = 2000.0
[output]
prefix = "opt"
"#,
    );
    let m = run(Scenario::Estimate, &optical, dir.path()).unwrap();
    assert!((m.derived["theta"].as_f64().unwrap() - 133.33333333333334).abs() < 1e-9);

    let missing = parse("[estimate]\nplatform = \"generic\"\nmu_cl = 1.0\n");
    assert!(matches!(
        run(Scenario::Estimate, &missing, dir.path()),
        Err(RunError::Config(_))
    ));
}

#[test]
fn timescales_scenario_reports_the_chain() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse(
        r#"
[oscillator]
mode = "canonical"
epsilon = 0.0011111111111111111
mu_cl = 1.0
[timescales]
tau_gamma = 2000.0
tau_d = 0.05
[output]
prefix = "ts"
"#,
    );
    let m = run(Scenario::Timescales, &cfg, dir.path()).unwrap();
    let ts = &m.derived["timescales"];
    assert!((ts["tau_hbar"].as_f64().unwrap() - 15.0).abs() < 1e-10);
    assert!((ts["theta"].as_f64().unwrap() - 133.33333333333334).abs() < 1e-9);
    assert_eq!(ts["mesoscopic"], serde_json::json!(true));
    assert!(m.outputs.is_empty());
}

#[test]
fn timescales_report_works_on_any_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::parse(&qcnms_cli::config::resolve_config("fig2").unwrap()).unwrap();
    let m = run(Scenario::Timescales, &cfg, dir.path()).unwrap();
    assert!((m.derived["timescales"]["tau_hbar"].as_f64().unwrap() - 15.0).abs() < 1e-9);
}

#[test]
fn verify_results_are_independent_of_thread_count() {
    let small = r#"
scenario = "verify"
[verify]
seed = 7
n_cases = 8
[output]
prefix = "v"
"#;
    let mut contents = Vec::new();
    for threads in ["1", "3"] {
        let dir = tempfile::tempdir().unwrap();
        let exe = env!("CARGO_BIN_EXE_qcnms");
        let cfg_path = dir.path().join("v.toml");
        std::fs::write(&cfg_path, small).unwrap();
        let status = Command::new(exe)
            .args(["verify", "--config"])
            .arg(&cfg_path)
            .arg("--out")
            .arg(dir.path())
            .env("QCNMS_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        contents.push(std::fs::read(dir.path().join("v_oracle_cases.csv")).unwrap());
    }
    assert_eq!(contents[0], contents[1]);
}

#[test]
fn exit_codes_follow_the_contract() {
    let exe = env!("CARGO_BIN_EXE_qcnms");
    let dir = tempfile::tempdir().unwrap();

    // config error: unknown bundled name
    let out = Command::new(exe)
        .args(["closed", "--config", "does-not-exist", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // config error: malformed TOML
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "not toml at all [").unwrap();
    let out = Command::new(exe)
        .args(["closed", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // numeric error: odd atom number in the split state
    let odd = dir.path().join("odd.toml");
    std::fs::write(
        &odd,
        "[phasediff]\natom_number = 101\nxi = 0.001\nt_max = 10.0\nn_times = 5\n",
    )
    .unwrap();
    let out = Command::new(exe)
        .args(["phasediff", "--config"])
        .arg(&odd)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // success
    let out = Command::new(exe)
        .args(["bec", "--config", "bec-rubidium", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
