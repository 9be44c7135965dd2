//! Command-line front end: figure presets, config-driven runs, validity
//! reports and spectrum queries.
//!
//! Exit codes: 0 success, 2 config error, 3 convergence/accuracy failure,
//! 4 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use modrabi::config::{load_config, ExperimentConfig};
use modrabi::experiment::{
    emit_artifacts, preset_output, run_config, run_preset, RunOptions, PRESET_NAMES,
};
use modrabi::model::ModelParams;
use modrabi::spectrum::{ground_state, jc_levels, jc_point};
use modrabi::table::OutputFormat;
use modrabi::{Error, Result};

#[derive(Parser)]
#[command(name = "modrabi", version, about = "Frequency-modulated qubit-boson dynamics: counter-rotating-term suppression benchmarks, spectra and phase diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory (overrides the config's [output] dir)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format for tables
    #[arg(long, global = true)]
    format: Option<OutputFormat>,

    /// Worker-pool size for sweeps (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Omit the timestamp metadata line (byte-identical reruns)
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Override the Fock cutoff N_c
    #[arg(long, global = true)]
    cutoff: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a figure preset (fig1a..fig3b)
    Preset { name: String },
    /// Run an experiment described by a TOML config file
    Run { config: PathBuf },
    /// Modulation-regime validity report for one parameter set
    Validity {
        #[arg(long, default_value_t = 1.0)]
        omega_0: f64,
        #[arg(long, default_value_t = 1.0)]
        omega_c: f64,
        #[arg(long)]
        g: f64,
        #[arg(long, default_value_t = 0.0)]
        xi: f64,
        #[arg(long, default_value_t = 0.0)]
        nu: f64,
        /// Largest excitation number N entering the inequalities
        #[arg(long, default_value_t = 2)]
        n_exc: usize,
    },
    /// Analytic JC levels and ground state at one (delta, g) point
    Spectrum {
        /// Detuning delta = omega_0 - omega_c in units of omega_c
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Coupling g in units of omega_c
        #[arg(long)]
        g: f64,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
}

fn options(cli: &Cli) -> RunOptions {
    RunOptions {
        workers: cli.workers,
        cutoff_override: cli.cutoff,
        no_timestamp: cli.no_timestamp,
        out_dir: cli.out.clone(),
        format_override: cli.format,
    }
}

fn run(cli: Cli) -> Result<()> {
    let opts = options(&cli);
    match &cli.command {
        Command::Preset { name } => {
            if !PRESET_NAMES.contains(&name.as_str()) {
                return Err(Error::UnknownPreset(name.clone()));
            }
            let artifacts = run_preset(name, &opts)?;
            let output = preset_output(name)?;
            let paths = emit_artifacts(&artifacts, &output, &opts)?;
            for p in paths {
                println!("{}", p.display());
            }
        }
        Command::Run { config } => {
            let cfg: ExperimentConfig = load_config(config)?;
            let artifacts = run_config(&cfg, &opts)?;
            let paths = emit_artifacts(&artifacts, &cfg.output, &opts)?;
            for p in paths {
                println!("{}", p.display());
            }
        }
        Command::Validity {
            omega_0,
            omega_c,
            g,
            xi,
            nu,
            n_exc,
        } => {
            let params = ModelParams::new(*omega_0, *omega_c, *g, *xi, *nu)?;
            let report = modrabi::analysis::check_validity(&params, *n_exc);
            let value = serde_json::json!({
                "regime": format!("{:?}", report.regime).to_lowercase(),
                "n_exc": n_exc,
                "model": params,
                "conditions": report.conditions.iter().map(|c| serde_json::json!({
                    "name": c.name,
                    "inequality": c.inequality,
                    "left": c.left,
                    "right": c.right,
                    "margin_ratio": c.margin_ratio,
                    "pass": c.pass,
                    "warn": c.warn,
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
        Command::Spectrum { delta, g, n_max } => {
            let params = jc_point(*delta, *g)?;
            let levels = jc_levels(&params, *n_max);
            let ground = ground_state(&params, *n_max)?;
            let value = serde_json::json!({
                "delta": delta,
                "g": g,
                "n_max": n_max,
                "levels": levels,
                "ground": ground,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
