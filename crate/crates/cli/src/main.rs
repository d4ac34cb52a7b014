use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qcnms_cli::config::{resolve_config, ExperimentConfig, Scenario};
use qcnms_cli::{run, RunError};

/// Reproducible runs of quantum-linewidth experiments for quasi-classical
/// Kerr oscillators: trajectories, spectra, dephasing baths, condensates,
/// phase diffusion, and survival estimates.
#[derive(Parser)]
#[command(name = "qcnms", version, about, max_term_width = 100)]
struct Cli {
    /// Scenario to run
    #[arg(value_enum)]
    scenario: Scenario,

    /// Config file path, or the name of a bundled config
    /// (fig1, fig2, fig3a, fig3b, bec-rubidium, phasediff-N100, verify)
    #[arg(long)]
    config: String,

    /// Output directory, created if missing
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn execute(cli: &Cli) -> Result<(), RunError> {
    let text = resolve_config(&cli.config)?;
    let cfg = ExperimentConfig::parse(&text)?;
    let manifest = run(cli.scenario, &cfg, &cli.out)?;
    println!(
        "{}: wrote {} file(s) to {} in {:.3} s",
        manifest.scenario,
        manifest.outputs.len() + 1,
        cli.out.display(),
        manifest.duration_seconds
    );
    if let Some(obj) = manifest.derived.as_object() {
        for (key, value) in obj {
            println!("  {key}: {value}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
