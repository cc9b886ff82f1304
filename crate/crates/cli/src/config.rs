//! Experiment configuration: one human-editable file (TOML or JSON)
//! holding the model, initial state, evolution grid, sampling budget,
//! noise, observable set, and spectroscopy knobs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use gapscope_core::evolution::TimeGrid;
use gapscope_core::hamiltonian::{self, Hamiltonian, Model};
use gapscope_core::observables::{ObservableMode, ObservableSet};
use gapscope_core::shadows::{ExperimentPlan, InitialState, Method, SamplingConfig};
use gapscope_core::spectroscopy::SpectroscopyConfig;
use gapscope_core::statevector::NoiseModel;

use crate::{CliError, Result};

fn config_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

/// Top-level experiment configuration as written on disk.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Hamiltonian model.
    pub model: ModelSection,
    /// Initial state specification.
    pub initial_state: InitialStateSection,
    /// Time grid and evolution method.
    pub evolution: EvolutionSection,
    /// Sampling budget and seed.
    pub sampling: SamplingSection,
    /// Gate noise (off by default).
    #[serde(default)]
    pub noise: NoiseSection,
    /// Observable set (3-local, all subsets by default).
    #[serde(default)]
    pub observables: ObservablesSection,
    /// Classical post-processing knobs.
    #[serde(default)]
    pub spectroscopy: SpectroscopySection,
    /// Output location.
    #[serde(default)]
    pub output: OutputSection,
}

/// Model selector and couplings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// `"heisenberg"` or `"tfim"`.
    pub kind: String,
    /// Chain length.
    pub n_qubits: usize,
    /// Heisenberg XX coupling (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jx: Option<f64>,
    /// Heisenberg YY coupling (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jy: Option<f64>,
    /// Heisenberg ZZ coupling (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jz: Option<f64>,
    /// TFIM ZZ coupling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    /// TFIM transverse field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
}

/// Initial state: exactly one of the two forms.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InitialStateSection {
    /// Product string over `{0, 1, +, -}`, character 0 = qubit 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<String>,
    /// Eigenstate superposition (requires diagonalizable width).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_superposition: Option<EigenSuperpositionSection>,
}

/// Σ w_k |E_{level_k}> with ascending-energy level indices.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EigenSuperpositionSection {
    /// Eigenstate indices (ground = 0, counting multiplicity).
    pub levels: Vec<usize>,
    /// Optional real weights; equal weights when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// Time grid and evolution method. Any two of `t_total`, `dt`, `n_t`
/// determine the third.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    /// Total evolution time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_total: Option<f64>,
    /// Time spacing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Number of time points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_t: Option<usize>,
    /// Total Trotter steps at the final time point.
    pub k_steps_total: usize,
    /// `"tepai"` or `"trotter"`.
    pub method: String,
    /// Interpolation angle as a fraction of π; required for tepai.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_over_pi: Option<f64>,
}

/// Sampling budget.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    /// Evolution circuits per time point (M).
    pub m: usize,
    /// Shots per circuit (N_s).
    pub n_s: usize,
    /// Master seed; all task streams derive from it.
    pub seed: u64,
}

/// Depolarizing gate noise.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    /// Master switch.
    pub enabled: bool,
    /// Single-qubit gate error probability.
    pub p1: f64,
    /// Two-qubit gate error probability.
    pub p2: f64,
    /// Whether measurement basis-change gates also get p1 noise.
    pub include_measurement_layer: bool,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            enabled: false,
            p1: 1e-4,
            p2: 1e-3,
            include_measurement_layer: true,
        }
    }
}

/// Observable enumeration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ObservablesSection {
    /// Maximum weight q.
    pub q: usize,
    /// `"all-subsets"` or `"contiguous-windows"`.
    pub mode: String,
}

impl Default for ObservablesSection {
    fn default() -> Self {
        Self {
            q: 3,
            mode: "all-subsets".into(),
        }
    }
}

/// Classical pipeline knobs (defaults follow the protocol write-up).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SpectroscopySection {
    /// Fraction of rows kept by the Ljung-Box ranking.
    pub keep_fraction: f64,
    /// Ljung-Box lags; `min(10, n_t/5)` when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lb_lags: Option<usize>,
    /// Dominant signal count.
    pub c: usize,
    /// Zero-padding multiple for the lag DFT.
    pub zero_pad: usize,
    /// Bins excluded around DC.
    pub dc_exclude_bins: usize,
    /// Peak prominence threshold (fraction of the band maximum).
    pub min_prominence_fraction: f64,
}

impl Default for SpectroscopySection {
    fn default() -> Self {
        let d = SpectroscopyConfig::default();
        Self {
            keep_fraction: d.keep_fraction,
            lb_lags: d.lb_lags,
            c: d.c,
            zero_pad: d.zero_pad,
            dc_exclude_bins: d.dc_exclude_bins,
            min_prominence_fraction: d.min_prominence_fraction,
        }
    }
}

/// Output location.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Directory for snapshots.jsonl, spectrum.csv, peaks.json,
    /// report.json.
    pub directory: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("gapscope-out"),
        }
    }
}

/// Everything needed to run, after validation.
#[derive(Debug)]
pub struct ResolvedExperiment {
    /// The Hamiltonian.
    pub hamiltonian: Hamiltonian,
    /// Ready-to-run plan.
    pub plan: ExperimentPlan,
    /// Observable set for the post-processing stage.
    pub observables: ObservableSet,
    /// Spectroscopy knobs.
    pub spectroscopy: SpectroscopyConfig,
    /// Output directory.
    pub output_dir: PathBuf,
    /// Hex SHA-256 of the canonical config JSON.
    pub config_sha: String,
}

impl ExperimentConfig {
    /// Parse a config file; `.json` files as JSON, everything else as
    /// TOML, with a JSON fallback for extensionless files that start
    /// with `{`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let is_json =
            path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        let cfg: ExperimentConfig = if is_json {
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        };
        Ok(cfg)
    }

    /// Hex SHA-256 over the canonical JSON serialization.
    pub fn sha(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Resolve the time grid from any two of `t_total`, `dt`, `n_t`.
    pub fn resolve_grid(&self) -> Result<TimeGrid> {
        let ev = &self.evolution;
        let (t_total, n_t) = match (ev.t_total, ev.dt, ev.n_t) {
            (Some(t), Some(dt), Some(n)) => {
                if (dt * n as f64 - t).abs() > 1e-9 * t.abs().max(1.0) {
                    return Err(config_err(
                        "evolution",
                        format!(
                            "t_total={t}, dt={dt}, n_t={n} are inconsistent (dt·n_t ≠ t_total)"
                        ),
                    ));
                }
                (t, n)
            }
            (Some(t), Some(dt), None) => {
                let n = (t / dt).round();
                if n < 1.0 || (n * dt - t).abs() > 1e-9 * t.abs().max(1.0) {
                    return Err(config_err(
                        "evolution.dt",
                        format!("t_total={t} is not an integer multiple of dt={dt}"),
                    ));
                }
                (t, n as usize)
            }
            (Some(t), None, Some(n)) => (t, n),
            (None, Some(dt), Some(n)) => (dt * n as f64, n),
            _ => {
                return Err(config_err(
                    "evolution",
                    "need at least two of t_total, dt, n_t",
                ));
            }
        };
        TimeGrid::new(t_total, n_t, ev.k_steps_total).map_err(|e| config_err("evolution", e))
    }

    /// Validate every section and build the runnable experiment.
    pub fn resolve(&self) -> Result<ResolvedExperiment> {
        let model = self.resolve_model()?;
        let hamiltonian = hamiltonian::build_model(model, self.model.n_qubits)
            .map_err(|e| config_err("model", e))?;

        let grid = self.resolve_grid()?;

        let method = Method::parse(&self.evolution.method).ok_or_else(|| {
            config_err(
                "evolution.method",
                format!(
                    "unknown method {:?}; expected \"tepai\" or \"trotter\"",
                    self.evolution.method
                ),
            )
        })?;
        let delta = match (method, self.evolution.delta_over_pi) {
            (Method::Tepai, Some(f)) => {
                if !(0.0 < f && f < 1.0) {
                    return Err(config_err(
                        "evolution.delta_over_pi",
                        format!("{f} outside (0, 1)"),
                    ));
                }
                f * std::f64::consts::PI
            }
            (Method::Tepai, None) => {
                return Err(config_err(
                    "evolution.delta_over_pi",
                    "required for method \"tepai\"",
                ));
            }
            (Method::Trotter, _) => 0.0,
        };

        if self.sampling.m < 1 || self.sampling.n_s < 1 {
            return Err(config_err("sampling", "m and n_s must be >= 1"));
        }

        let noise = if self.noise.enabled {
            Some(
                NoiseModel::new(self.noise.p1, self.noise.p2)
                    .map_err(|e| config_err("noise", e))?,
            )
        } else {
            None
        };

        let initial_spec = self.resolve_initial_state()?;
        let (initial, degenerate) = initial_spec.build(&hamiltonian).map_err(CliError::from)?;

        let obs_mode = match self.observables.mode.as_str() {
            "all-subsets" => ObservableMode::AllSubsets,
            "contiguous-windows" => ObservableMode::ContiguousWindows,
            other => {
                return Err(config_err(
                    "observables.mode",
                    format!("unknown mode {other:?}; expected \"all-subsets\" or \"contiguous-windows\""),
                ));
            }
        };
        let observables =
            ObservableSet::enumerate(self.model.n_qubits, self.observables.q, obs_mode)
                .map_err(|e| config_err("observables.q", e))?;

        let sp = &self.spectroscopy;
        if !(0.0..=1.0).contains(&sp.keep_fraction) {
            return Err(config_err(
                "spectroscopy.keep_fraction",
                "must be in [0, 1]",
            ));
        }
        if sp.c < 1 || sp.zero_pad < 1 {
            return Err(config_err("spectroscopy", "c and zero_pad must be >= 1"));
        }
        let spectroscopy = SpectroscopyConfig {
            keep_fraction: sp.keep_fraction,
            lb_lags: sp.lb_lags,
            c: sp.c,
            zero_pad: sp.zero_pad,
            dc_exclude_bins: sp.dc_exclude_bins,
            min_prominence_fraction: sp.min_prominence_fraction,
        };

        let plan = ExperimentPlan::new(
            hamiltonian.clone(),
            initial,
            degenerate,
            grid,
            SamplingConfig {
                method,
                delta,
                m_samples: self.sampling.m,
                shots_per_sample: self.sampling.n_s,
                noise,
                noise_on_measurement: self.noise.include_measurement_layer,
                seed: self.sampling.seed,
            },
        )
        .map_err(CliError::from)?;

        Ok(ResolvedExperiment {
            hamiltonian,
            plan,
            observables,
            spectroscopy,
            output_dir: self.output.directory.clone(),
            config_sha: self.sha(),
        })
    }

    fn resolve_model(&self) -> Result<Model> {
        let m = &self.model;
        match m.kind.as_str() {
            "heisenberg" => {
                if m.j.is_some() || m.d.is_some() {
                    return Err(config_err("model", "j/d are TFIM parameters; use jx/jy/jz"));
                }
                Ok(Model::Heisenberg {
                    jx: m.jx.unwrap_or(1.0),
                    jy: m.jy.unwrap_or(1.0),
                    jz: m.jz.unwrap_or(1.0),
                })
            }
            "tfim" => {
                if m.jx.is_some() || m.jy.is_some() || m.jz.is_some() {
                    return Err(config_err(
                        "model",
                        "jx/jy/jz are Heisenberg parameters; use j/d",
                    ));
                }
                match (m.j, m.d) {
                    (Some(j), Some(d)) => Ok(Model::Tfim { j, d }),
                    _ => Err(config_err("model", "tfim requires both j and d")),
                }
            }
            other => Err(config_err(
                "model.kind",
                format!("unknown model {other:?}; expected \"heisenberg\" or \"tfim\""),
            )),
        }
    }

    fn resolve_initial_state(&self) -> Result<InitialState> {
        let init = &self.initial_state;
        match (&init.product, &init.eigen_superposition) {
            (Some(p), None) => Ok(InitialState::Product(p.clone())),
            (None, Some(e)) => Ok(InitialState::EigenSuperposition {
                levels: e.levels.clone(),
                weights: e.weights.clone(),
            }),
            (Some(_), Some(_)) => Err(config_err(
                "initial_state",
                "give either product or eigen_superposition, not both",
            )),
            (None, None) => Err(config_err(
                "initial_state",
                "one of product or eigen_superposition is required",
            )),
        }
    }
}
