//! Experiment runners: presets reproducing the reference figure panels,
//! config-driven runs, sweep orchestration over a worker pool, and the
//! cutoff-doubling convergence check stamped into every output table.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::analysis::{
    check_validity, fidelity, fidelity_at, fidelity_envelope, populations,
    state_transfer_fidelity_under, PopulationTarget,
};
use crate::config::{
    ExperimentConfig, ExperimentKind, GridRange, InitialState, OutputSettings,
    PropagationSettings, SweepAxis, SweepParam,
};
use crate::evolve::{
    analytic_jc_evolution, propagate, propagate_pair, suggested_dt, PropagationConfig,
};
use crate::hamiltonian::{build_jc_interaction, build_rotating_frame, TimeDependentHamiltonian};
use crate::hilbert::{
    make_basis_state, make_coherent_state, HilbertDims, QuantumState, QubitAmplitudes, QubitLevel,
};
use crate::model::ModelParams;
use crate::spectrum::{jc_levels, phase_diagram, Branch, JCEigenLevel};
use crate::table::{Column, OutputFormat, ResultTable};
use crate::{Error, Result};

/// Acceptance quantities must move less than this under cutoff doubling.
pub const CONVERGENCE_LIMIT: f64 = 1e-4;

/// CLI-level overrides applied on top of a resolved config.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub workers: Option<usize>,
    pub cutoff_override: Option<usize>,
    pub no_timestamp: bool,
    pub out_dir: Option<PathBuf>,
    pub format_override: Option<OutputFormat>,
}

/// One output file: a numeric table or a JSON report.
#[derive(Debug, Clone)]
pub enum Payload {
    Table(ResultTable),
    Report(serde_json::Value),
}

#[derive(Debug, Clone)]
pub struct Artifact {
    pub stem: String,
    pub payload: Payload,
}

struct RunOutput {
    table: ResultTable,
    /// Scalars compared across the cutoff-doubling rerun.
    quantities: Vec<f64>,
}

/// Build the initial state described by the config.
pub fn build_initial(initial: &InitialState, dims: HilbertDims) -> Result<QuantumState> {
    match *initial {
        InitialState::Basis { qubit, n } => make_basis_state(qubit, n, dims),
        InitialState::SuperpositionCoherent { alpha } => make_coherent_state(
            QubitAmplitudes::equal_superposition(),
            Complex64::new(alpha, 0.0),
            dims,
        ),
    }
}

/// Integration grid whose sample times t_k = t_start + k·span/samples are
/// identical across cutoff-doubling reruns (the substep count absorbs the
/// dt change).
fn aligned_config(
    h: &TimeDependentHamiltonian,
    settings: &PropagationSettings,
    retain_states: bool,
) -> PropagationConfig {
    let span = settings.t_end - settings.t_start;
    let dt_max = settings.dt.unwrap_or_else(|| suggested_dt(h));
    let per_sample = span / settings.samples as f64;
    let substeps = (per_sample / dt_max).ceil().max(1.0) as usize;
    PropagationConfig {
        t_start: settings.t_start,
        t_end: settings.t_end,
        dt: span / (settings.samples * substeps) as f64,
        sampling_stride: substeps,
        tolerance: settings.tolerance,
        retain_states,
    }
}

/// Envelope and point value of F(t_s), t_s = π/(2g), between the exact
/// modulated dynamics and the rotating-wave target. The envelope window
/// is one bare counter-rotating period: |t − t_s| ≤ π/(ω₀+ω_c).
#[derive(Debug, Clone, Copy)]
pub struct TsFidelity {
    pub envelope: f64,
    pub at_ts: f64,
}

pub fn fidelity_ts(
    params: &ModelParams,
    dims: HilbertDims,
    initial: &InitialState,
    tolerance: f64,
) -> Result<TsFidelity> {
    if params.g <= 0.0 {
        return Err(Error::InvalidParams("fidelity at t_s needs g > 0".to_owned()));
    }
    let t_s = PI / (2.0 * params.g);
    let half_width = PI / params.omega_sum();
    let h_exact = build_rotating_frame(params, dims);
    let h_target = build_jc_interaction(params, dims);
    let psi0 = build_initial(initial, dims)?;
    let cfg = PropagationConfig {
        tolerance,
        ..PropagationConfig::for_hamiltonian(&h_exact, 0.0, t_s + half_width)
    };
    let traj = propagate_pair(&h_exact, &h_target, &psi0, &cfg)?;
    Ok(TsFidelity {
        envelope: fidelity_envelope(&traj, t_s, half_width)?,
        at_ts: fidelity_at(&traj, t_s)?,
    })
}

fn parse_population_target(s: &str) -> Result<PopulationTarget> {
    match s {
        "qubit_e" => return Ok(PopulationTarget::QubitExcited),
        "qubit_g" => return Ok(PopulationTarget::QubitGround),
        _ => {}
    }
    let (q, rest) = match s.split_at_checked(1) {
        Some(("g", rest)) => (QubitLevel::Ground, rest),
        Some(("e", rest)) => (QubitLevel::Excited, rest),
        _ => {
            return Err(Error::Config(format!(
                "population: bad target '{s}' (g<n> | e<n> | qubit_g | qubit_e)"
            )))
        }
    };
    let n: usize = rest
        .parse()
        .map_err(|_| Error::Config(format!("population: bad Fock number in target '{s}'")))?;
    Ok(PopulationTarget::Basis(q, n))
}

fn target_column(s: &str) -> String {
    format!("p_{s}")
}

// ---- runners ----

fn run_fidelity_dynamics(cfg: &ExperimentConfig, dims: HilbertDims) -> Result<RunOutput> {
    let settings = cfg
        .propagation
        .ok_or_else(|| Error::Config("propagation: missing".to_owned()))?;
    let h_exact = build_rotating_frame(&cfg.model, dims);
    let h_target = build_jc_interaction(&cfg.model, dims);
    let psi0 = build_initial(&cfg.initial_state, dims)?;
    let pcfg = aligned_config(&h_exact, &settings, false);
    let traj = propagate_pair(&h_exact, &h_target, &psi0, &pcfg)?;

    let mut table = ResultTable::new(vec![
        Column::new("t", "1/omega_0"),
        Column::new("F", "dimensionless"),
        Column::new("norm_exact", "dimensionless"),
        Column::new("norm_target", "dimensionless"),
    ]);
    let fid = traj.records.fidelity.as_ref().expect("pair records");
    let norm_t = traj.records.norm_sq_target.as_ref().expect("pair records");
    for (k, &t) in traj.times.iter().enumerate() {
        table.push_row(vec![t, fid[k], traj.records.norm_sq[k], norm_t[k]]);
    }
    let quantities = fid.clone();
    Ok(RunOutput { table, quantities })
}

fn run_population_dynamics(cfg: &ExperimentConfig, dims: HilbertDims) -> Result<RunOutput> {
    let settings = cfg
        .propagation
        .ok_or_else(|| Error::Config("propagation: missing".to_owned()))?;
    let targets: Vec<PopulationTarget> = cfg
        .population
        .targets
        .iter()
        .map(|s| parse_population_target(s))
        .collect::<Result<_>>()?;
    let h = build_rotating_frame(&cfg.model, dims);
    let psi0 = build_initial(&cfg.initial_state, dims)?;
    let pcfg = aligned_config(&h, &settings, true);
    let traj = propagate(&h, &psi0, &pcfg)?;
    let pops = populations(&traj, &targets)?;

    let mut schema = vec![Column::new("t", "1/omega_0")];
    for s in &cfg.population.targets {
        schema.push(Column::new(&target_column(s), "probability"));
    }
    if cfg.population.jc_reference {
        for s in &cfg.population.targets {
            schema.push(Column::new(&format!("{}_jc", target_column(s)), "probability"));
        }
    }
    schema.push(Column::new("norm", "dimensionless"));
    let mut table = ResultTable::new(schema);

    let mut quantities = Vec::new();
    for (k, &t) in traj.times.iter().enumerate() {
        let mut row = vec![t];
        row.extend(&pops[k]);
        if cfg.population.jc_reference {
            let reference = analytic_jc_evolution(&cfg.model, &psi0, t)?;
            for target in &targets {
                let p = match *target {
                    PopulationTarget::Basis(q, n) => reference.population(q, n)?,
                    PopulationTarget::QubitExcited => {
                        reference.qubit_population(QubitLevel::Excited)
                    }
                    PopulationTarget::QubitGround => reference.qubit_population(QubitLevel::Ground),
                };
                row.push(p);
            }
        }
        row.push(traj.records.norm_sq[k]);
        quantities.extend(&row[1..row.len() - 1]);
        table.push_row(row);
    }
    Ok(RunOutput { table, quantities })
}

fn run_rabi_transfer(cfg: &ExperimentConfig, dims: HilbertDims) -> Result<RunOutput> {
    let tolerance = cfg.propagation.map(|p| p.tolerance).unwrap_or(1e-8);
    let h = build_rotating_frame(&cfg.model, dims);
    let pcfg = PropagationConfig {
        tolerance,
        ..PropagationConfig::for_hamiltonian(&h, 0.0, 1.0)
    };
    let f = state_transfer_fidelity_under(&h, &pcfg)?;
    let t_s = PI / (2.0 * cfg.model.g);
    let mut table = ResultTable::new(vec![
        Column::new("t_s", "1/omega_0"),
        Column::new("transfer_fidelity", "dimensionless"),
    ]);
    table.push_row(vec![t_s, f]);
    Ok(RunOutput {
        table,
        quantities: vec![f],
    })
}

fn sweep_points(axes: &[SweepAxis]) -> Vec<Vec<f64>> {
    match axes {
        [a] => a.values().into_iter().map(|v| vec![v]).collect(),
        [a, b] => {
            let bv = b.values();
            a.values()
                .into_iter()
                .flat_map(|va| bv.iter().map(move |&vb| vec![va, vb]))
                .collect()
        }
        _ => Vec::new(),
    }
}

fn run_fidelity_sweep(cfg: &ExperimentConfig, dims: HilbertDims) -> Result<RunOutput> {
    let tolerance = cfg.propagation.map(|p| p.tolerance).unwrap_or(1e-8);
    let points = sweep_points(&cfg.sweep);
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|values| -> Result<Vec<f64>> {
            let mut params = cfg.model;
            for (axis, &v) in cfg.sweep.iter().zip(values.iter()) {
                axis.parameter.apply(&mut params, v);
            }
            params.validate()?;
            let f = fidelity_ts(&params, dims, &cfg.initial_state, tolerance)?;
            let fails = check_validity(&params, 2)
                .conditions
                .iter()
                .filter(|c| !c.pass)
                .count();
            let mut row = values.clone();
            row.push(f.envelope);
            row.push(f.at_ts);
            row.push(fails as f64);
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut schema: Vec<Column> = cfg
        .sweep
        .iter()
        .map(|a| Column::new(a.parameter.as_str(), "omega_0 units"))
        .collect();
    schema.push(Column::new("F_ts", "dimensionless"));
    schema.push(Column::new("F_ts_point", "dimensionless"));
    schema.push(Column::new("validity_fails", "count"));
    let mut table = ResultTable::new(schema);
    let f_col = values_column(&rows, cfg.sweep.len());
    for row in rows {
        table.push_row(row);
    }
    Ok(RunOutput {
        table,
        quantities: f_col,
    })
}

fn values_column(rows: &[Vec<f64>], idx: usize) -> Vec<f64> {
    rows.iter().map(|r| r[idx]).collect()
}

fn spectrum_grid(range: &GridRange) -> Vec<f64> {
    range.values()
}

fn run_spectrum(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let n_max = cfg.spectrum.n_max;
    let mut schema = vec![Column::new("g", "omega_c units"), Column::new("e_g0", "omega_c units")];
    for n in 1..=n_max {
        schema.push(Column::new(&format!("e_{n}_minus"), "omega_c units"));
        schema.push(Column::new(&format!("e_{n}_plus"), "omega_c units"));
    }
    let mut table = ResultTable::new(schema);
    let mut quantities = Vec::new();
    for g in spectrum_grid(&cfg.spectrum.g) {
        let mut params = cfg.model;
        params.g = g;
        params.validate()?;
        let levels = jc_levels(&params, n_max);
        let mut row = vec![g];
        row.push(levels[0].energy());
        for n in 1..=n_max {
            for branch in [Branch::Minus, Branch::Plus] {
                let e = levels
                    .iter()
                    .find_map(|l| match *l {
                        JCEigenLevel::Dressed {
                            n: m,
                            branch: b,
                            energy,
                            ..
                        } if m == n && b == branch => Some(energy),
                        _ => None,
                    })
                    .expect("level present");
                row.push(e);
            }
        }
        quantities.extend(&row[1..]);
        table.push_row(row);
    }
    Ok(RunOutput { table, quantities })
}

fn run_phase_diagram(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let deltas = spectrum_grid(&cfg.spectrum.delta);
    let gs = spectrum_grid(&cfg.spectrum.g);
    let grid = phase_diagram(&deltas, &gs, cfg.spectrum.n_max)?;
    let mut table = ResultTable::new(vec![
        Column::new("delta", "omega_c units"),
        Column::new("g", "omega_c units"),
        Column::new("ground_label", "manifold"),
        Column::new("ground_energy", "omega_c units"),
        Column::new("p_e", "probability"),
        Column::new("boundary", "flag"),
    ]);
    let mut quantities = Vec::new();
    for row in &grid {
        for p in row {
            quantities.push(p.ground_label as f64);
            quantities.push(p.p_e);
            table.push_row(vec![
                p.delta,
                p.g,
                p.ground_label as f64,
                p.ground_energy,
                p.p_e,
                if p.boundary { 1.0 } else { 0.0 },
            ]);
        }
    }
    Ok(RunOutput { table, quantities })
}

fn run_validity(cfg: &ExperimentConfig) -> Result<Artifact> {
    let report = check_validity(&cfg.model, cfg.validity_n_exc);
    let value = json!({
        "regime": format!("{:?}", report.regime).to_lowercase(),
        "n_exc": cfg.validity_n_exc,
        "model": cfg.model,
        "conditions": report.conditions.iter().map(|c| json!({
            "name": c.name,
            "inequality": c.inequality,
            "left": c.left,
            "right": c.right,
            "margin_ratio": c.margin_ratio,
            "pass": c.pass,
            "warn": c.warn,
        })).collect::<Vec<_>>(),
    });
    Ok(Artifact {
        stem: "validity".to_owned(),
        payload: Payload::Report(value),
    })
}

// ---- convergence + dispatch ----

fn dispatch(cfg: &ExperimentConfig, dims: HilbertDims) -> Result<RunOutput> {
    match cfg.kind {
        ExperimentKind::FidelityDynamics => run_fidelity_dynamics(cfg, dims),
        ExperimentKind::PopulationDynamics => run_population_dynamics(cfg, dims),
        ExperimentKind::RabiTransfer => run_rabi_transfer(cfg, dims),
        ExperimentKind::FidelitySweep => run_fidelity_sweep(cfg, dims),
        ExperimentKind::Spectrum => run_spectrum(cfg),
        ExperimentKind::PhaseDiagram => run_phase_diagram(cfg),
        ExperimentKind::ValidityReport => unreachable!("handled before dispatch"),
    }
}

fn finalize(cfg: &ExperimentConfig, opts: &RunOptions, stem: &str) -> Result<Artifact> {
    let dims = opts
        .cutoff_override
        .map(HilbertDims::new)
        .transpose()?
        .unwrap_or(cfg.dims);

    let base = dispatch(cfg, dims)?;
    let doubled = dispatch(cfg, dims.doubled())?;
    if base.quantities.len() != doubled.quantities.len() {
        return Err(Error::Config(
            "convergence check: quantity vectors differ in length".to_owned(),
        ));
    }
    let max_delta = base
        .quantities
        .iter()
        .zip(doubled.quantities.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if max_delta > CONVERGENCE_LIMIT {
        return Err(Error::Convergence {
            max_delta,
            limit: CONVERGENCE_LIMIT,
            cutoff: dims.fock_cutoff(),
            doubled: dims.doubled().fock_cutoff(),
        });
    }

    let mut table = base.table;
    for (k, v) in cfg.metadata_entries() {
        table.insert_meta(&k, v);
    }
    table.insert_meta("fock_cutoff", dims.fock_cutoff());
    table.insert_meta("artifact_version", crate::VERSION);
    table.insert_meta(
        "convergence",
        format!(
            "pass (max_delta {max_delta:.3e}; cutoff {} -> {})",
            dims.fock_cutoff(),
            dims.doubled().fock_cutoff()
        ),
    );
    if cfg.output.timestamp && !opts.no_timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        table.insert_meta("timestamp_unix", now);
    }
    Ok(Artifact {
        stem: stem.to_owned(),
        payload: Payload::Table(table),
    })
}

fn run_one(cfg: &ExperimentConfig, opts: &RunOptions, stem: &str) -> Result<Vec<Artifact>> {
    if cfg.kind == ExperimentKind::ValidityReport {
        let mut artifact = run_validity(cfg)?;
        artifact.stem = stem.to_owned();
        return Ok(vec![artifact]);
    }
    Ok(vec![finalize(cfg, opts, stem)?])
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match workers {
        None => f(),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
            pool.install(f)
        }
    }
}

/// Run a resolved config, returning the output artifacts (not yet written).
pub fn run_config(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<Artifact>> {
    with_pool(opts.workers, || run_one(cfg, opts, cfg.kind.as_str()))
}

/// Write artifacts to the output directory in the configured format.
pub fn emit_artifacts(
    artifacts: &[Artifact],
    output: &OutputSettings,
    opts: &RunOptions,
) -> Result<Vec<PathBuf>> {
    let dir = opts.out_dir.clone().unwrap_or_else(|| output.dir.clone());
    let format = opts.format_override.unwrap_or(output.format);
    let mut paths = Vec::new();
    for artifact in artifacts {
        match &artifact.payload {
            Payload::Table(t) => {
                paths.push(crate::table::emit(t, format, &dir, &artifact.stem)?);
            }
            Payload::Report(v) => {
                std::fs::create_dir_all(&dir)?;
                let path = dir.join(format!("{}.json", artifact.stem));
                let file = std::fs::File::create(&path)?;
                serde_json::to_writer_pretty(file, v)
                    .map_err(|e| Error::Config(format!("JSON write failed: {e}")))?;
                paths.push(path);
            }
        }
    }
    Ok(paths)
}

// ---- presets ----

pub const PRESET_NAMES: &[&str] = &[
    "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b",
];

fn base_config(kind: ExperimentKind, model: ModelParams) -> ExperimentConfig {
    ExperimentConfig {
        kind,
        model,
        dims: HilbertDims::new(HilbertDims::DEFAULT_FOCK_CUTOFF).expect("valid default"),
        initial_state: InitialState::SuperpositionCoherent { alpha: 0.1 },
        propagation: None,
        population: crate::config::PopulationSettings {
            targets: vec!["g0".to_owned()],
            jc_reference: false,
        },
        sweep: Vec::new(),
        spectrum: crate::config::SpectrumSettings {
            n_max: 12,
            g: GridRange {
                min: 0.0,
                max: 3.0,
                count: 121,
            },
            delta: GridRange {
                min: -1.5,
                max: 1.5,
                count: 121,
            },
        },
        validity_n_exc: 2,
        output: OutputSettings {
            dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
            timestamp: true,
        },
    }
}

fn dynamics_settings(model: &ModelParams, t_end: f64) -> PropagationSettings {
    let rabi_period = PI / model.g;
    PropagationSettings {
        t_start: 0.0,
        t_end,
        dt: None,
        tolerance: 1e-8,
        samples: ((400.0 * t_end / rabi_period).ceil() as usize).max(2),
    }
}

/// Two displayed Rabi oscillation periods, the window every dynamics
/// panel uses.
fn two_rabi_periods(model: &ModelParams) -> f64 {
    2.0 * PI / model.g
}

/// The resolved experiment list for a figure preset. Parameters come from
/// the reference panels: g/ω₀ = 0.5, ω_c = ω₀, α = 0.1 throughout panels
/// 1(a)–(c) and 2; ξ = 2.76 puts 2ξ at the second zero of J₀.
pub fn preset_runs(name: &str) -> Result<Vec<(String, ExperimentConfig)>> {
    let resonant = |g: f64, xi: f64, nu: f64| ModelParams::resonant(g, xi, nu).expect("preset params");
    let mut runs = Vec::new();
    match name {
        "fig1a" => {
            for nu in [0.0, 3.6, 4.0, 5.0] {
                let model = resonant(0.5, 2.76, nu);
                let mut cfg = base_config(ExperimentKind::FidelityDynamics, model);
                cfg.propagation = Some(dynamics_settings(&model, two_rabi_periods(&model)));
                runs.push((format!("fig1a_nu{nu}"), cfg));
            }
        }
        "fig1b" => {
            for xi in [0.0, 10.0, 20.0, 40.0] {
                let model = resonant(0.5, xi, 0.1);
                let mut cfg = base_config(ExperimentKind::FidelityDynamics, model);
                cfg.propagation = Some(dynamics_settings(&model, two_rabi_periods(&model)));
                runs.push((format!("fig1b_xi{xi}"), cfg));
            }
        }
        "fig1c" => {
            let model = resonant(0.5, 0.0, 0.0);
            let mut cfg = base_config(ExperimentKind::FidelitySweep, model);
            cfg.sweep = vec![
                SweepAxis {
                    parameter: SweepParam::Nu,
                    min: 0.0,
                    max: 8.0,
                    count: 50,
                },
                SweepAxis {
                    parameter: SweepParam::Xi,
                    min: 0.0,
                    max: 3.0,
                    count: 50,
                },
            ];
            cfg.output.format = OutputFormat::Json;
            runs.push(("fig1c".to_owned(), cfg));
        }
        "fig1d" => {
            for (case, xi, nu) in [("high", 2.76, 5.0), ("low", 30.0, 0.1)] {
                for omega_c in [0.9, 1.0, 1.1] {
                    let model = ModelParams::new(1.0, omega_c, 0.5, xi, nu).expect("preset");
                    let mut cfg = base_config(ExperimentKind::FidelitySweep, model);
                    cfg.sweep = vec![SweepAxis {
                        parameter: SweepParam::G,
                        min: 0.05,
                        max: 1.5,
                        count: 30,
                    }];
                    runs.push((format!("fig1d_{case}_wc{omega_c}"), cfg));
                }
            }
        }
        "fig2a" | "fig2b" => {
            let (values, is_nu): (&[f64], bool) = if name == "fig2a" {
                (&[0.0, 3.6, 4.0, 6.0], true)
            } else {
                (&[0.0, 10.0, 30.0, 40.0], false)
            };
            for &v in values {
                let model = if is_nu {
                    resonant(0.5, 2.76, v)
                } else {
                    resonant(0.5, v, 0.1)
                };
                let mut cfg = base_config(ExperimentKind::PopulationDynamics, model);
                cfg.initial_state = InitialState::Basis {
                    qubit: QubitLevel::Ground,
                    n: 0,
                };
                cfg.population.targets = vec!["g0".to_owned()];
                cfg.propagation = Some(dynamics_settings(&model, two_rabi_periods(&model)));
                let tag = if is_nu { "nu" } else { "xi" };
                runs.push((format!("{name}_{tag}{v}"), cfg));
            }
        }
        "fig2c" | "fig2d" => {
            let model = if name == "fig2c" {
                resonant(0.5, 2.76, 5.0)
            } else {
                resonant(0.5, 40.0, 0.1)
            };
            let mut cfg = base_config(ExperimentKind::PopulationDynamics, model);
            cfg.initial_state = InitialState::Basis {
                qubit: QubitLevel::Excited,
                n: 0,
            };
            cfg.population.targets = vec!["e0".to_owned(), "g1".to_owned()];
            cfg.population.jc_reference = true;
            cfg.propagation = Some(dynamics_settings(&model, two_rabi_periods(&model)));
            runs.push((name.to_owned(), cfg));
        }
        "fig3a" => {
            let model = ModelParams::new(1.0, 1.0, 0.5, 0.0, 0.0).expect("preset");
            let cfg = base_config(ExperimentKind::Spectrum, model);
            runs.push(("fig3a".to_owned(), cfg));
        }
        "fig3b" => {
            let model = ModelParams::new(1.0, 1.0, 0.5, 0.0, 0.0).expect("preset");
            let mut cfg = base_config(ExperimentKind::PhaseDiagram, model);
            cfg.output.format = OutputFormat::Json;
            runs.push(("fig3b".to_owned(), cfg));
        }
        other => return Err(Error::UnknownPreset(other.to_owned())),
    }
    Ok(runs)
}

/// Execute a figure preset; one artifact per curve/panel.
pub fn run_preset(name: &str, opts: &RunOptions) -> Result<Vec<Artifact>> {
    let runs = preset_runs(name)?;
    with_pool(opts.workers, || {
        let mut artifacts = Vec::new();
        for (stem, cfg) in &runs {
            artifacts.extend(run_one(cfg, opts, stem)?);
        }
        Ok(artifacts)
    })
}

/// Output settings of a preset (all runs of one preset share them).
pub fn preset_output(name: &str) -> Result<OutputSettings> {
    Ok(preset_runs(name)?
        .first()
        .map(|(_, cfg)| cfg.output.clone())
        .expect("presets are non-empty"))
}

// ---- state transfer figure of merit (re-exported convenience) ----

/// Transfer fidelity under the exact modulated dynamics at the preset
/// accuracy, plus the same figure against the ideal JC target (≈ 1).
pub fn transfer_report(params: &ModelParams, dims: HilbertDims) -> Result<(f64, f64)> {
    let h_exact = build_rotating_frame(params, dims);
    let h_ideal = build_jc_interaction(params, dims);
    let cfg = PropagationConfig::for_hamiltonian(&h_exact, 0.0, 1.0);
    let exact = state_transfer_fidelity_under(&h_exact, &cfg)?;
    let cfg = PropagationConfig::for_hamiltonian(&h_ideal, 0.0, 1.0);
    let ideal = state_transfer_fidelity_under(&h_ideal, &cfg)?;
    Ok((exact, ideal))
}
