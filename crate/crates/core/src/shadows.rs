//! Pauli-basis classical shadows over sampled evolution circuits.
//!
//! One snapshot is the tuple `(Γ, bases, bits)`: the signed weight of
//! the evolution circuit that produced the state, one random measurement
//! basis per qubit, and the measured bitstring. The estimator of a Pauli
//! observable from one snapshot is a product over the observable's
//! support — `3·(-1)^bit` where the letter matches the measured basis,
//! zero otherwise — multiplied by Γ, and the experiment estimate is the
//! plain mean over all `M × N_s` records at a time point.
//!
//! An [`ExperimentPlan`] drives the full collection: for each time point
//! `s` and each circuit index `m` it samples (or reuses) one evolution
//! circuit, then takes `N_s` shots. All randomness is derived from
//! `(seed, role, s, m, shot)` counters, so any scheduling of the cells
//! reproduces the same records.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::circuit::RotationCircuit;
use crate::eigen;
use crate::evolution::{self, PaiSchedule, TimeGrid};
use crate::hamiltonian::Hamiltonian;
use crate::math;
use crate::pauli::{Pauli, PauliString};
use crate::statevector::{Basis, NoiseModel, StateVector};
use crate::streams::{self, StreamRole};
use crate::{Error, Result};

/// How the evolution leg is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Quasiprobability-sampled circuits with weights `Γ_l`.
    Tepai,
    /// The deterministic product-formula circuit, weight 1.
    Trotter,
}

impl Method {
    /// Lowercase name used in files and configs.
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Tepai => "tepai",
            Method::Trotter => "trotter",
        }
    }

    /// Parse the lowercase name.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "tepai" => Some(Method::Tepai),
            "trotter" => Some(Method::Trotter),
            _ => None,
        }
    }
}

/// One classical-shadow record.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotRecord {
    /// Time-point index `s`, 1-based.
    pub time_index: usize,
    /// Signed weight `Γ_l` of the generating circuit (1 for Trotter).
    pub gamma: f64,
    /// Per-qubit measurement basis.
    pub bases: Vec<Basis>,
    /// Measured bits; bit k of the word is qubit k.
    pub bits: u64,
}

impl SnapshotRecord {
    /// The measured bit of `qubit`.
    pub fn bit(&self, qubit: usize) -> bool {
        self.bits >> qubit & 1 == 1
    }
}

fn pauli_matches_basis(p: Pauli, b: Basis) -> bool {
    matches!(
        (p, b),
        (Pauli::X, Basis::X) | (Pauli::Y, Basis::Y) | (Pauli::Z, Basis::Z)
    )
}

/// Single-snapshot estimator of a Pauli observable (Γ *not* applied):
/// zero unless every non-identity letter matches its measured basis, in
/// which case the value is `Π 3·(-1)^bit = ±3^weight`.
pub fn snapshot_estimate(record: &SnapshotRecord, observable: &PauliString) -> f64 {
    assert_eq!(record.bases.len(), observable.n_qubits(), "width mismatch");
    let mut value = 1.0;
    let mut support = observable.x_mask() | observable.z_mask();
    while support != 0 {
        let site = support.trailing_zeros() as usize;
        support &= support - 1;
        if !pauli_matches_basis(observable.letter(site), record.bases[site]) {
            return 0.0;
        }
        value *= if record.bit(site) { -3.0 } else { 3.0 };
    }
    value
}

/// Mean of `Γ · snapshot_estimate` over a record slice (the records of
/// one time point).
pub fn estimate_observable(records: &[SnapshotRecord], observable: &PauliString) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptySnapshotSet);
    }
    let sum: f64 = records
        .iter()
        .map(|r| r.gamma * snapshot_estimate(r, observable))
        .sum();
    Ok(sum / records.len() as f64)
}

/// Variance bound on the overall estimator for a weight-q Pauli
/// observable: `Γ²((3^q - 1)/(M·N_s) + 1/M)`.
pub fn variance_bound(gamma_sq: f64, q: usize, m: usize, n_s: usize) -> f64 {
    assert!(gamma_sq > 0.0 && m >= 1 && n_s >= 1 && q >= 1);
    let shadow = crate::math::powi(3.0, q as i32);
    gamma_sq * ((shadow - 1.0) / (m as f64 * n_s as f64) + 1.0 / m as f64)
}

/// The same bound at a fixed total budget `N_total = M·N_s`:
/// `Γ²(3^q - 1 + N_s)/N_total`.
pub fn variance_bound_fixed_budget(gamma_sq: f64, q: usize, n_s: usize, n_total: usize) -> f64 {
    assert!(gamma_sq > 0.0 && n_s >= 1 && n_total >= 1 && q >= 1);
    let shadow = crate::math::powi(3.0, q as i32);
    gamma_sq * (shadow - 1.0 + n_s as f64) / n_total as f64
}

/// Draw one shadow snapshot from an evolved state: uniform random basis
/// per qubit, then a terminal measurement. `measurement_noise` inserts
/// single-qubit depolarizing after each non-trivial basis-change gate.
pub fn collect_snapshot<R: Rng + ?Sized>(
    state: StateVector,
    measurement_noise: Option<&NoiseModel>,
    rng: &mut R,
) -> Result<(Vec<Basis>, u64)> {
    let n = state.n_qubits();
    let mut bases = Vec::with_capacity(n);
    for _ in 0..n {
        bases.push(match rng.random_range(0..3u8) {
            0 => Basis::X,
            1 => Basis::Y,
            _ => Basis::Z,
        });
    }
    let bits = state.measure_in_bases(&bases, measurement_noise, rng)?;
    Ok((bases, bits))
}

/// Initial-state specification.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Product state over `{0, 1, +, -}`, character 0 = qubit 0.
    Product(String),
    /// Real-weighted superposition of energy eigenstates (ascending
    /// order, ground = 0). `weights = None` means equal weights.
    EigenSuperposition {
        /// Eigenstate indices, counting multiplicity.
        levels: Vec<usize>,
        /// Optional weights, normalized internally.
        weights: Option<Vec<f64>>,
    },
}

impl InitialState {
    /// Build the state for `h`. The boolean flags a superposition that
    /// touches a (near-)degenerate level, where the eigenbasis choice
    /// inside the manifold is arbitrary.
    pub fn build(&self, h: &Hamiltonian) -> Result<(StateVector, bool)> {
        match self {
            InitialState::Product(spec) => {
                let psi = StateVector::product(spec)?;
                if psi.n_qubits() != h.n_qubits() {
                    return Err(Error::InvalidInitialState(alloc::format!(
                        "product state has {} qubits but the Hamiltonian has {}",
                        psi.n_qubits(),
                        h.n_qubits()
                    )));
                }
                Ok((psi, false))
            }
            InitialState::EigenSuperposition { levels, weights } => {
                let eig = eigen::eigendecompose(h)?;
                let w: Vec<f64> = match weights {
                    Some(w) => w.clone(),
                    None => alloc::vec![1.0; levels.len()],
                };
                let psi = eig.superposition(levels, &w)?;
                let degenerate = levels.iter().any(|&l| eig.is_degenerate(l, 1e-9));
                Ok((psi, degenerate))
            }
        }
    }
}

/// Snapshot-set metadata carried alongside the records.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMeta {
    /// Register width.
    pub n_qubits: usize,
    /// Number of time points.
    pub n_t: usize,
    /// Circuits per time point.
    pub m_samples: usize,
    /// Shots per circuit.
    pub shots_per_sample: usize,
    /// Time spacing of the grid.
    pub dt: f64,
    /// Evolution method.
    pub method: Method,
    /// Interpolation angle as a fraction of π (0 for Trotter).
    pub delta_over_pi: f64,
    /// Master seed.
    pub seed: u64,
    /// True when the initial state involved a degenerate level.
    pub degenerate_initial: bool,
}

/// All records of one experiment, grouped by time point.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSet {
    meta: SnapshotMeta,
    /// Sorted by time index; each block has `m_samples·shots_per_sample`
    /// records.
    records: Vec<SnapshotRecord>,
}

impl SnapshotSet {
    /// Assemble and validate: every time index `1..=n_t` must carry
    /// exactly `m_samples · shots_per_sample` records of the right
    /// width. Records are stably sorted by time index.
    pub fn from_records(meta: SnapshotMeta, mut records: Vec<SnapshotRecord>) -> Result<Self> {
        let per_point = meta.m_samples * meta.shots_per_sample;
        if per_point == 0 {
            return Err(Error::InvalidPlan(
                "m_samples and shots_per_sample must be >= 1".into(),
            ));
        }
        for r in &records {
            if r.bases.len() != meta.n_qubits {
                return Err(Error::InvalidPlan(alloc::format!(
                    "record at s={} has {} bases, expected {}",
                    r.time_index,
                    r.bases.len(),
                    meta.n_qubits
                )));
            }
        }
        records.sort_by_key(|r| r.time_index);
        let mut counts = alloc::vec![0usize; meta.n_t + 1];
        for r in &records {
            if r.time_index == 0 || r.time_index > meta.n_t {
                return Err(Error::InvalidPlan(alloc::format!(
                    "record time index {} outside 1..={}",
                    r.time_index,
                    meta.n_t
                )));
            }
            counts[r.time_index] += 1;
        }
        for (s, &count) in counts.iter().enumerate().skip(1) {
            if count == 0 {
                return Err(Error::MissingTimePoint(s));
            }
            if count != per_point {
                return Err(Error::InvalidPlan(alloc::format!(
                    "time point {s} has {count} records, expected {per_point}"
                )));
            }
        }
        Ok(Self { meta, records })
    }

    /// Metadata.
    pub fn meta(&self) -> &SnapshotMeta {
        &self.meta
    }

    /// All records, sorted by time index.
    pub fn records(&self) -> &[SnapshotRecord] {
        &self.records
    }

    /// The records of time point `s` (1-based).
    pub fn records_at(&self, s: usize) -> &[SnapshotRecord] {
        let per_point = self.meta.m_samples * self.meta.shots_per_sample;
        let start = (s - 1) * per_point;
        &self.records[start..start + per_point]
    }
}

/// Parameters of one experiment beyond the physics inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingConfig {
    /// Evolution method.
    pub method: Method,
    /// Interpolation angle Δ (ignored for Trotter).
    pub delta: f64,
    /// Circuits per time point (M).
    pub m_samples: usize,
    /// Shots per circuit (N_s).
    pub shots_per_sample: usize,
    /// Gate-level depolarizing noise, if any.
    pub noise: Option<NoiseModel>,
    /// Whether basis-change gates of the measurement layer get noise.
    pub noise_on_measurement: bool,
    /// Master seed.
    pub seed: u64,
}

/// A fully validated, ready-to-run experiment.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    hamiltonian: Hamiltonian,
    initial: StateVector,
    degenerate_initial: bool,
    grid: TimeGrid,
    config: SamplingConfig,
    /// Precomputed per-term decomposition (Tepai only).
    schedule: Option<PaiSchedule>,
}

/// The evolution circuit of one cell with its weight.
#[derive(Debug, Clone)]
pub struct CellCircuit {
    /// Gates to apply after the initial state.
    pub circuit: RotationCircuit,
    /// Signed weight `Γ_l` (1 for Trotter).
    pub gamma: f64,
}

/// Per-cell bookkeeping for the run report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    /// Time index, 1-based.
    pub s: usize,
    /// Circuit index within the time point, 0-based.
    pub m_index: usize,
    /// Signed weight of the sampled circuit.
    pub gamma: f64,
    /// Depth of the evolution circuit.
    pub depth: usize,
    /// Gate count of the evolution circuit.
    pub gate_count: usize,
}

/// Records and stats of one cell.
#[derive(Debug, Clone)]
pub struct CellOutput {
    /// Bookkeeping.
    pub stats: CellStats,
    /// The `N_s` records.
    pub records: Vec<SnapshotRecord>,
}

/// Everything an experiment produces.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    /// The snapshot records with metadata.
    pub set: SnapshotSet,
    /// Per-cell circuit statistics in `(s, m)` order.
    pub cells: Vec<CellStats>,
}

impl ExperimentPlan {
    /// Validate inputs and precompute the sampling schedule.
    pub fn new(
        hamiltonian: Hamiltonian,
        initial: StateVector,
        degenerate_initial: bool,
        grid: TimeGrid,
        config: SamplingConfig,
    ) -> Result<Self> {
        if initial.n_qubits() != hamiltonian.n_qubits() {
            return Err(Error::InvalidPlan(alloc::format!(
                "initial state width {} != Hamiltonian width {}",
                initial.n_qubits(),
                hamiltonian.n_qubits()
            )));
        }
        if config.m_samples < 1 || config.shots_per_sample < 1 {
            return Err(Error::InvalidPlan(
                "m_samples and shots_per_sample must be >= 1".into(),
            ));
        }
        let schedule = match config.method {
            Method::Tepai => Some(PaiSchedule::new(
                &hamiltonian,
                grid.step_size(),
                config.delta,
            )?),
            Method::Trotter => None,
        };
        Ok(Self {
            hamiltonian,
            initial,
            degenerate_initial,
            grid,
            config,
            schedule,
        })
    }

    /// The Hamiltonian under simulation.
    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    /// The time grid.
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// The sampling configuration.
    pub fn config(&self) -> &SamplingConfig {
        &self.config
    }

    /// The prepared initial state.
    pub fn initial_state(&self) -> &StateVector {
        &self.initial
    }

    /// Snapshot metadata this plan will produce.
    pub fn meta(&self) -> SnapshotMeta {
        SnapshotMeta {
            n_qubits: self.hamiltonian.n_qubits(),
            n_t: self.grid.n_t(),
            m_samples: self.config.m_samples,
            shots_per_sample: self.config.shots_per_sample,
            dt: self.grid.dt(),
            method: self.config.method,
            delta_over_pi: match self.config.method {
                Method::Tepai => self.config.delta / math::PI,
                Method::Trotter => 0.0,
            },
            seed: self.config.seed,
            degenerate_initial: self.degenerate_initial,
        }
    }

    /// Build (Trotter) or sample (Tepai) the evolution circuit of cell
    /// `(s, m)`.
    pub fn build_circuit(&self, s: usize, m: usize) -> CellCircuit {
        let k_s = self.grid.steps_at(s);
        match self.config.method {
            Method::Tepai => {
                let mut rng = streams::derive(self.config.seed, StreamRole::Circuit, s, m, 0);
                let sampled = self
                    .schedule
                    .as_ref()
                    .expect("tepai schedule")
                    .sample(k_s, &mut rng);
                CellCircuit {
                    circuit: sampled.circuit,
                    gamma: sampled.gamma_signed,
                }
            }
            Method::Trotter => {
                let t_eff = k_s as f64 * self.grid.step_size();
                let circuit = evolution::trotter_circuit(&self.hamiltonian, t_eff, k_s)
                    .expect("k_s >= 1 by TimeGrid construction");
                CellCircuit {
                    circuit,
                    gamma: 1.0,
                }
            }
        }
    }

    /// Reference Trotter circuit stats (depth, gate count) at `s`, for
    /// depth comparisons in run reports.
    pub fn trotter_reference(&self, s: usize) -> (usize, usize) {
        let k_s = self.grid.steps_at(s);
        let t_eff = k_s as f64 * self.grid.step_size();
        let circuit = evolution::trotter_circuit(&self.hamiltonian, t_eff, k_s)
            .expect("k_s >= 1 by TimeGrid construction");
        (circuit.depth(), circuit.len())
    }

    /// Take the `N_s` shots of a cell against a pre-evolved noise-free
    /// state. Only valid when gate noise is off (then evolution consumes
    /// no shot randomness, so this is identical to re-evolving).
    pub fn shots_from_state(
        &self,
        s: usize,
        m: usize,
        gamma: f64,
        evolved: &StateVector,
    ) -> Result<Vec<SnapshotRecord>> {
        debug_assert!(self.config.noise.is_none());
        let mut records = Vec::with_capacity(self.config.shots_per_sample);
        for shot in 0..self.config.shots_per_sample {
            let mut rng = streams::derive(self.config.seed, StreamRole::Shot, s, m, shot);
            let (bases, bits) = collect_snapshot(evolved.clone(), None, &mut rng)?;
            records.push(SnapshotRecord {
                time_index: s,
                gamma,
                bases,
                bits,
            });
        }
        Ok(records)
    }

    /// Run the shots of one cell given its circuit.
    pub fn run_shots(&self, s: usize, m: usize, cell: &CellCircuit) -> Result<Vec<SnapshotRecord>> {
        match &self.config.noise {
            None => {
                let mut psi = self.initial.clone();
                psi.apply_circuit(&cell.circuit);
                self.shots_from_state(s, m, cell.gamma, &psi)
            }
            Some(noise) => {
                let meas_noise = self.config.noise_on_measurement.then_some(noise);
                let mut records = Vec::with_capacity(self.config.shots_per_sample);
                for shot in 0..self.config.shots_per_sample {
                    let mut rng = streams::derive(self.config.seed, StreamRole::Shot, s, m, shot);
                    let mut psi = self.initial.clone();
                    psi.apply_circuit_noisy(&cell.circuit, noise, &mut rng);
                    let (bases, bits) = collect_snapshot(psi, meas_noise, &mut rng)?;
                    records.push(SnapshotRecord {
                        time_index: s,
                        gamma: cell.gamma,
                        bases,
                        bits,
                    });
                }
                Ok(records)
            }
        }
    }

    /// Simulate one `(s, m)` cell from scratch.
    pub fn simulate_cell(&self, s: usize, m: usize) -> Result<CellOutput> {
        let cell = self.build_circuit(s, m);
        let records = self.run_shots(s, m, &cell)?;
        Ok(CellOutput {
            stats: CellStats {
                s,
                m_index: m,
                gamma: cell.gamma,
                depth: cell.circuit.depth(),
                gate_count: cell.circuit.len(),
            },
            records,
        })
    }

    /// Run the whole experiment sequentially.
    ///
    /// Deterministic Trotter circuits with noise off share one evolved
    /// state per time point; output is bit-identical to calling
    /// [`simulate_cell`](Self::simulate_cell) for every cell.
    pub fn run(&self) -> Result<ExperimentOutput> {
        let n_t = self.grid.n_t();
        let per_point = self.config.m_samples * self.config.shots_per_sample;
        let mut records = Vec::with_capacity(n_t * per_point);
        let mut cells = Vec::with_capacity(n_t * self.config.m_samples);
        for s in 1..=n_t {
            let trotter_clean =
                self.config.method == Method::Trotter && self.config.noise.is_none();
            if trotter_clean {
                let cell = self.build_circuit(s, 0);
                let stats_template = CellStats {
                    s,
                    m_index: 0,
                    gamma: cell.gamma,
                    depth: cell.circuit.depth(),
                    gate_count: cell.circuit.len(),
                };
                let mut psi = self.initial.clone();
                psi.apply_circuit(&cell.circuit);
                for m in 0..self.config.m_samples {
                    records.extend(self.shots_from_state(s, m, cell.gamma, &psi)?);
                    cells.push(CellStats {
                        m_index: m,
                        ..stats_template
                    });
                }
            } else {
                for m in 0..self.config.m_samples {
                    let out = self.simulate_cell(s, m)?;
                    records.extend(out.records);
                    cells.push(out.stats);
                }
            }
        }
        let set = SnapshotSet::from_records(self.meta(), records)?;
        Ok(ExperimentOutput { set, cells })
    }
}
