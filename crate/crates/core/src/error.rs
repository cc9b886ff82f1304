use alloc::string::String;

/// Errors surfaced by the core engine.
///
/// Contract violations (identity rotation axes, width mismatches between
/// operators and states) panic instead: they indicate a bug in the
/// caller, not a recoverable condition.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Model construction was asked for fewer than two sites.
    #[error("{model} chain needs at least 2 qubits, got {n_qubits}")]
    InvalidModel {
        /// Model name.
        model: &'static str,
        /// Requested width.
        n_qubits: usize,
    },

    /// Observable locality out of `1..=n_qubits`.
    #[error("locality q={q} out of range 1..={n_qubits}")]
    InvalidLocality {
        /// Requested locality.
        q: usize,
        /// System width.
        n_qubits: usize,
    },

    /// A product formula needs at least one step.
    #[error("trotter step count must be >= 1, got {0}")]
    InvalidStepCount(usize),

    /// Angle decomposition parameters outside `0 <= |theta| <= delta < pi`.
    #[error("angle decomposition needs |theta| <= delta < pi, got theta={theta}, delta={delta}")]
    PaiDomain {
        /// Rotation angle.
        theta: f64,
        /// Interpolation angle.
        delta: f64,
    },

    /// The interpolation angle must dominate every scheduled rotation.
    #[error("delta={delta} is smaller than the largest scheduled angle {max_theta}")]
    DeltaTooSmall {
        /// Configured interpolation angle.
        delta: f64,
        /// Largest |theta| in the schedule.
        max_theta: f64,
    },

    /// Dense-matrix operation beyond the supported width.
    #[error("{what} supports at most {max_qubits} qubits, got {n_qubits}")]
    Capacity {
        /// Operation name.
        what: &'static str,
        /// Requested width.
        n_qubits: usize,
        /// Supported maximum.
        max_qubits: usize,
    },

    /// Estimation was asked for on an empty record set.
    #[error("no snapshot records available")]
    EmptySnapshotSet,

    /// A time index in `1..=n_t` has no records.
    #[error("no snapshot records for time point {0}")]
    MissingTimePoint(usize),

    /// Every signal row was constant; nothing to analyze.
    #[error("all signal rows are degenerate (zero variance)")]
    DegenerateSignals,

    /// More dominant signals requested than time points available.
    #[error("requested {c} dominant signals but only {n_t} time points")]
    TooManySignals {
        /// Requested count.
        c: usize,
        /// Available time points.
        n_t: usize,
    },

    /// State norm drifted beyond tolerance; internal consistency failure.
    #[error("state norm drifted to {norm_sqr} (|1 - norm^2| > {tolerance})")]
    NormDrift {
        /// Measured squared norm.
        norm_sqr: f64,
        /// Allowed drift.
        tolerance: f64,
    },

    /// Probability parameter outside `[0, 1]`.
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    /// Unparseable Pauli letter string.
    #[error("invalid pauli string {0:?}: only letters I, X, Y, Z are allowed")]
    InvalidPauliString(String),

    /// Initial-state specification could not be built.
    #[error("invalid initial state: {0}")]
    InvalidInitialState(String),

    /// Experiment plan parameters are inconsistent.
    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),
}
