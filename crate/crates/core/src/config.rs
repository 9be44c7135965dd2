//! Experiment configuration: a flat-sectioned TOML file describing one
//! experiment, validated into a fully resolved [`ExperimentConfig`].
//! CLI flags can override the output directory, format, worker count and
//! Fock cutoff after resolution.

use std::path::PathBuf;

use serde::Deserialize;

use crate::hilbert::{HilbertDims, QubitLevel};
use crate::model::ModelParams;
use crate::table::OutputFormat;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    FidelityDynamics,
    FidelitySweep,
    PopulationDynamics,
    RabiTransfer,
    Spectrum,
    PhaseDiagram,
    ValidityReport,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::FidelityDynamics => "fidelity_dynamics",
            ExperimentKind::FidelitySweep => "fidelity_sweep",
            ExperimentKind::PopulationDynamics => "population_dynamics",
            ExperimentKind::RabiTransfer => "rabi_transfer",
            ExperimentKind::Spectrum => "spectrum",
            ExperimentKind::PhaseDiagram => "phase_diagram",
            ExperimentKind::ValidityReport => "validity_report",
        }
    }
}

/// Initial state of a dynamics run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Basis { qubit: QubitLevel, n: usize },
    /// (|g⟩+|e⟩)/√2 ⊗ |α⟩
    SuperpositionCoherent { alpha: f64 },
}

/// Sweepable model parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Nu,
    Xi,
    G,
    OmegaC,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Nu => "nu",
            SweepParam::Xi => "xi",
            SweepParam::G => "g",
            SweepParam::OmegaC => "omega_c",
        }
    }

    pub fn apply(self, params: &mut ModelParams, value: f64) {
        match self {
            SweepParam::Nu => params.nu = value,
            SweepParam::Xi => params.xi = value,
            SweepParam::G => params.g = value,
            SweepParam::OmegaC => params.omega_c = value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub parameter: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + step * i as f64).collect()
    }
}

/// Propagation settings resolved from config or defaults. The integration
/// step itself is derived from the generator's fastest phase unless `dt`
/// pins it; `samples` output samples are recorded on an aligned grid so
/// cutoff-doubling reruns compare pointwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationSettings {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: Option<f64>,
    pub tolerance: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSettings {
    pub targets: Vec<String>,
    pub jc_reference: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSettings {
    pub n_max: usize,
    pub g: GridRange,
    pub delta: GridRange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSettings {
    pub dir: PathBuf,
    pub format: OutputFormat,
    pub timestamp: bool,
}

/// Fully resolved experiment description; every run is a pure function of
/// this value (no randomness anywhere in the pipeline).
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub model: ModelParams,
    pub dims: HilbertDims,
    pub initial_state: InitialState,
    pub propagation: Option<PropagationSettings>,
    pub population: PopulationSettings,
    pub sweep: Vec<SweepAxis>,
    pub spectrum: SpectrumSettings,
    pub validity_n_exc: usize,
    pub output: OutputSettings,
}

impl ExperimentConfig {
    /// Resolved key/value pairs recorded in output metadata.
    pub fn metadata_entries(&self) -> Vec<(String, String)> {
        let mut m: Vec<(String, String)> = vec![
            ("kind".into(), self.kind.as_str().into()),
            ("omega_0".into(), self.model.omega_0.to_string()),
            ("omega_c".into(), self.model.omega_c.to_string()),
            ("g".into(), self.model.g.to_string()),
            ("xi".into(), self.model.xi.to_string()),
            ("nu".into(), self.model.nu.to_string()),
            ("fock_cutoff".into(), self.dims.fock_cutoff().to_string()),
        ];
        match self.initial_state {
            InitialState::Basis { qubit, n } => {
                let q = if qubit == QubitLevel::Ground { "g" } else { "e" };
                m.push(("initial_state".into(), format!("basis {q}{n}")));
            }
            InitialState::SuperpositionCoherent { alpha } => {
                m.push((
                    "initial_state".into(),
                    format!("superposition_coherent alpha={alpha}"),
                ));
            }
        }
        if let Some(p) = &self.propagation {
            m.push(("t_start".into(), p.t_start.to_string()));
            m.push(("t_end".into(), p.t_end.to_string()));
            m.push(("samples".into(), p.samples.to_string()));
            m.push(("tolerance".into(), p.tolerance.to_string()));
        }
        for (i, ax) in self.sweep.iter().enumerate() {
            m.push((
                format!("sweep_axis_{i}"),
                format!(
                    "{} in [{}, {}] x{}",
                    ax.parameter.as_str(),
                    ax.min,
                    ax.max,
                    ax.count
                ),
            ));
        }
        m
    }
}

// ---- raw layer (serde) ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    kind: ExperimentKind,
    model: Option<RawModel>,
    hilbert: Option<RawHilbert>,
    initial_state: Option<RawInitialState>,
    propagation: Option<RawPropagation>,
    population: Option<RawPopulation>,
    sweep: Option<RawSweep>,
    spectrum: Option<RawSpectrum>,
    validity: Option<RawValidity>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    omega_0: Option<f64>,
    omega_c: Option<f64>,
    g: Option<f64>,
    xi: Option<f64>,
    nu: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHilbert {
    fock_cutoff: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitialState {
    kind: String,
    qubit: Option<String>,
    fock: Option<usize>,
    alpha: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPropagation {
    t_start: Option<f64>,
    t_end: Option<f64>,
    dt: Option<f64>,
    tolerance: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPopulation {
    targets: Vec<String>,
    jc_reference: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axes: Vec<RawAxis>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    parameter: SweepParam,
    min: f64,
    max: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    min: f64,
    max: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    n_max: Option<usize>,
    g: Option<RawRange>,
    delta: Option<RawRange>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawValidity {
    n_exc: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    format: Option<OutputFormat>,
    timestamp: Option<bool>,
}

fn cfg_err(section: &str, msg: &str) -> Error {
    Error::Config(format!("{section}: {msg}"))
}

/// Parse and validate a TOML experiment config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawExperiment =
        toml::from_str(text).map_err(|e| Error::Config(format!("TOML parse: {e}")))?;
    resolve(raw)
}

/// Parse a config file from disk.
pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

fn resolve(raw: RawExperiment) -> Result<ExperimentConfig> {
    let kind = raw.kind;

    // model defaults: the resonant high-frequency working point
    let m = raw.model.unwrap_or(RawModel {
        omega_0: None,
        omega_c: None,
        g: None,
        xi: None,
        nu: None,
    });
    let model = ModelParams::new(
        m.omega_0.unwrap_or(1.0),
        m.omega_c.unwrap_or(1.0),
        m.g.unwrap_or(0.5),
        m.xi.unwrap_or(2.76),
        m.nu.unwrap_or(5.0),
    )
    .map_err(|e| cfg_err("model", &e.to_string()))?;

    let dims = HilbertDims::new(
        raw.hilbert
            .map(|h| h.fock_cutoff)
            .unwrap_or(HilbertDims::DEFAULT_FOCK_CUTOFF),
    )
    .map_err(|e| cfg_err("hilbert", &e.to_string()))?;

    let initial_state = match raw.initial_state {
        None => {
            if kind == ExperimentKind::PopulationDynamics {
                return Err(cfg_err(
                    "initial_state",
                    "required for population_dynamics (e.g. kind = \"basis\", qubit = \"e\", fock = 0)",
                ));
            }
            InitialState::SuperpositionCoherent { alpha: 0.1 }
        }
        Some(s) => match s.kind.as_str() {
            "basis" => {
                let qubit = match s.qubit.as_deref() {
                    Some("g") => QubitLevel::Ground,
                    Some("e") => QubitLevel::Excited,
                    other => {
                        return Err(cfg_err(
                            "initial_state",
                            &format!("qubit must be \"g\" or \"e\", got {other:?}"),
                        ))
                    }
                };
                InitialState::Basis {
                    qubit,
                    n: s.fock.unwrap_or(0),
                }
            }
            "superposition_coherent" => InitialState::SuperpositionCoherent {
                alpha: s.alpha.unwrap_or(0.1),
            },
            other => {
                return Err(cfg_err(
                    "initial_state",
                    &format!("unknown kind '{other}' (basis | superposition_coherent)"),
                ))
            }
        },
    };

    let needs_propagation = matches!(
        kind,
        ExperimentKind::FidelityDynamics
            | ExperimentKind::PopulationDynamics
            | ExperimentKind::RabiTransfer
    );
    let propagation = if needs_propagation {
        let two_rabi_periods = if model.g > 0.0 {
            2.0 * std::f64::consts::PI / model.g
        } else {
            2.0 * std::f64::consts::PI / model.omega_0
        };
        let p = raw.propagation.unwrap_or(RawPropagation {
            t_start: None,
            t_end: None,
            dt: None,
            tolerance: None,
            samples: None,
        });
        let t_start = p.t_start.unwrap_or(0.0);
        let t_end = match p.t_end {
            Some(v) => v,
            None if p.t_start.is_none() && p.dt.is_none() => two_rabi_periods,
            None => {
                return Err(cfg_err(
                    "propagation (PropagationConfig)",
                    "t_end missing and dt underivable without a horizon",
                ));
            }
        };
        if !(t_end > t_start) {
            return Err(cfg_err(
                "propagation (PropagationConfig)",
                &format!("t_end ({t_end}) must exceed t_start ({t_start})"),
            ));
        }
        // presets target 400 samples per displayed Rabi period
        let default_samples = if model.g > 0.0 {
            (400.0 * (t_end - t_start) / (std::f64::consts::PI / model.g)).ceil() as usize
        } else {
            800
        };
        Some(PropagationSettings {
            t_start,
            t_end,
            dt: p.dt,
            tolerance: p.tolerance.unwrap_or(1e-8),
            samples: p.samples.unwrap_or(default_samples).max(2),
        })
    } else {
        None
    };

    let population = PopulationSettings {
        targets: raw
            .population
            .as_ref()
            .map(|p| p.targets.clone())
            .unwrap_or_else(|| vec!["g0".to_owned()]),
        jc_reference: raw
            .population
            .as_ref()
            .and_then(|p| p.jc_reference)
            .unwrap_or(false),
    };
    if kind == ExperimentKind::PopulationDynamics && population.targets.is_empty() {
        return Err(cfg_err("population", "targets must be non-empty"));
    }

    let sweep = match (&kind, raw.sweep) {
        (ExperimentKind::FidelitySweep, Some(s)) => {
            if s.axes.is_empty() || s.axes.len() > 2 {
                return Err(cfg_err("sweep", "need 1 or 2 axes"));
            }
            let mut axes = Vec::new();
            for a in s.axes {
                if a.count < 1 {
                    return Err(cfg_err("sweep", "axis count must be >= 1"));
                }
                if !(a.max >= a.min) {
                    return Err(cfg_err("sweep", "axis max must be >= min"));
                }
                axes.push(SweepAxis {
                    parameter: a.parameter,
                    min: a.min,
                    max: a.max,
                    count: a.count,
                });
            }
            axes
        }
        (ExperimentKind::FidelitySweep, None) => {
            return Err(cfg_err("sweep", "fidelity_sweep requires [sweep] axes"));
        }
        (_, Some(_)) => {
            return Err(cfg_err(
                "sweep",
                &format!("sweep axes only apply to fidelity_sweep, not {}", kind.as_str()),
            ));
        }
        (_, None) => Vec::new(),
    };

    let sp = raw.spectrum.unwrap_or(RawSpectrum {
        n_max: None,
        g: None,
        delta: None,
    });
    let to_range = |r: Option<RawRange>, default: GridRange, what: &str| -> Result<GridRange> {
        match r {
            None => Ok(default),
            Some(r) => {
                if r.count < 1 || !(r.max >= r.min) {
                    return Err(cfg_err("spectrum", &format!("bad {what} range")));
                }
                Ok(GridRange {
                    min: r.min,
                    max: r.max,
                    count: r.count,
                })
            }
        }
    };
    let spectrum = SpectrumSettings {
        n_max: sp.n_max.unwrap_or(12),
        g: to_range(
            sp.g,
            GridRange {
                min: 0.0,
                max: 3.0,
                count: 121,
            },
            "g",
        )?,
        delta: to_range(
            sp.delta,
            GridRange {
                min: -1.5,
                max: 1.5,
                count: 121,
            },
            "delta",
        )?,
    };
    if spectrum.n_max < 1 {
        return Err(cfg_err("spectrum", "n_max must be >= 1"));
    }

    let output = match raw.output {
        None => OutputSettings {
            dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
            timestamp: true,
        },
        Some(o) => OutputSettings {
            dir: o.dir.unwrap_or_else(|| PathBuf::from("out")),
            format: o.format.unwrap_or(OutputFormat::Csv),
            timestamp: o.timestamp.unwrap_or(true),
        },
    };

    Ok(ExperimentConfig {
        kind,
        model,
        dims,
        initial_state,
        propagation,
        population,
        sweep,
        spectrum,
        validity_n_exc: raw.validity.map(|v| v.n_exc).unwrap_or(2),
        output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_fidelity_dynamics_resolves_with_defaults() {
        let cfg = parse_config("kind = \"fidelity_dynamics\"").unwrap();
        assert_eq!(cfg.kind, ExperimentKind::FidelityDynamics);
        assert_eq!(cfg.model.g, 0.5);
        assert_eq!(cfg.dims.fock_cutoff(), 20);
        let p = cfg.propagation.unwrap();
        assert!((p.t_end - 2.0 * std::f64::consts::PI / 0.5).abs() < 1e-12);
        assert_eq!(
            cfg.initial_state,
            InitialState::SuperpositionCoherent { alpha: 0.1 }
        );
    }

    #[test]
    fn t_end_missing_with_partial_section_names_propagation() {
        let err = parse_config(
            "kind = \"fidelity_dynamics\"\n[propagation]\ndt = 0.001\n",
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("PropagationConfig"), "got: {msg}");
    }

    #[test]
    fn sweep_requires_axes() {
        let err = parse_config("kind = \"fidelity_sweep\"").unwrap_err();
        assert!(err.to_string().contains("sweep"));

        let cfg = parse_config(
            r#"
kind = "fidelity_sweep"
[[sweep.axes]]
parameter = "nu"
min = 0.0
max = 8.0
count = 50
[[sweep.axes]]
parameter = "xi"
min = 0.0
max = 3.0
count = 50
"#,
        )
        .unwrap();
        assert_eq!(cfg.sweep.len(), 2);
        assert_eq!(cfg.sweep[0].values().len(), 50);
        assert!((cfg.sweep[1].values()[49] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn population_requires_initial_state() {
        let err = parse_config("kind = \"population_dynamics\"").unwrap_err();
        assert!(err.to_string().contains("initial_state"));
    }

    #[test]
    fn unknown_field_rejected() {
        let err = parse_config("kind = \"fidelity_dynamics\"\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("TOML parse"));
    }

    #[test]
    fn model_validation_propagates() {
        let err = parse_config("kind = \"fidelity_dynamics\"\n[model]\ng = -1.0\n").unwrap_err();
        assert!(err.to_string().contains("model"));
    }
}
