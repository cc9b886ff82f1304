//! Product-formula circuits and their quasiprobability compression.
//!
//! A first-order Trotter circuit applies `R_{P_j, θ_j}` with
//! `θ_j = 2 h_j δ` for each Hamiltonian term, `K` times. The angle
//! interpolation replaces each rotation by a random member of
//! `{identity, R(sign(θ)Δ), R(π)}` drawn from the quasiprobability
//! decomposition
//!
//! ```text
//!   R_θ = a1·I + a2·R_{sign(θ)Δ} + a3·R_π
//!   a1 = csc(Δ/2) cos(|θ|/2) sin(Δ/2 - |θ|/2)
//!   a2 = csc(Δ) sin(|θ|)
//!   a3 = -sec(Δ/2) sin(|θ|/2) sin(Δ/2 - |θ|/2)
//! ```
//!
//! with `a1 + a2 + a3 = 1`. Sampling branch `d` with probability
//! `|a_d|/γ`, `γ = Σ|a_d|`, and accumulating `Γ ← Γ·γ·sign(a_d)` makes
//! `E[Γ · sampled channel] = R_θ` exactly; the price is a variance
//! multiplier `Γ²` in any estimator built on the samples.

use alloc::vec::Vec;

use rand::Rng;

use crate::circuit::RotationCircuit;
use crate::hamiltonian::Hamiltonian;
use crate::math;
use crate::pauli::PauliString;
use crate::{Error, Result};

/// Quasiprobability coefficients of one rotation angle at a fixed Δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaiCoefficients {
    /// Identity-branch coefficient.
    pub a1: f64,
    /// Δ-branch coefficient.
    pub a2: f64,
    /// π-branch coefficient (nonpositive on the valid domain).
    pub a3: f64,
    /// Normalization `γ = |a1| + |a2| + |a3| >= 1`.
    pub gamma: f64,
}

impl PaiCoefficients {
    /// Decompose `R_θ` over `{I, R_{±Δ}, R_π}`.
    ///
    /// Requires `0 <= |θ| <= Δ < π` and `Δ > 0`; a negative θ uses the
    /// coefficients of |θ| with the Δ-branch rotating by `sign(θ)·Δ`.
    pub fn new(theta: f64, delta: f64) -> Result<Self> {
        let t = math::abs(theta);
        let in_domain = delta > 0.0 && delta < math::PI && t <= delta && t.is_finite();
        if !in_domain {
            return Err(Error::PaiDomain { theta, delta });
        }
        let half_d = delta / 2.0;
        let half_t = t / 2.0;
        let a1 = math::cos(half_t) * math::sin(half_d - half_t) / math::sin(half_d);
        let a2 = math::sin(t) / math::sin(delta);
        let a3 = -math::sin(half_t) * math::sin(half_d - half_t) / math::cos(half_d);
        let gamma = math::abs(a1) + math::abs(a2) + math::abs(a3);
        Ok(Self { a1, a2, a3, gamma })
    }

    /// Branch probabilities `|a_d| / γ`.
    pub fn probabilities(&self) -> [f64; 3] {
        [
            math::abs(self.a1) / self.gamma,
            math::abs(self.a2) / self.gamma,
            math::abs(self.a3) / self.gamma,
        ]
    }
}

/// A sampled evolution circuit with its signed post-processing weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCircuit {
    /// The retained gates; every angle is `±Δ` or `π`.
    pub circuit: RotationCircuit,
    /// Signed accumulated weight `Γ_l`; `|Γ_l|` is identical across all
    /// samples of one schedule.
    pub gamma_signed: f64,
    /// Number of retained (non-identity) gates.
    pub gate_count: usize,
}

/// Per-term decomposition of one Trotter step, precomputed so sampling
/// a circuit is a stream of cheap branch draws.
#[derive(Debug, Clone)]
pub struct PaiSchedule {
    n_qubits: usize,
    delta: f64,
    entries: Vec<ScheduleEntry>,
    /// `Π_j γ(θ_j)` over one Trotter step.
    gamma_per_step: f64,
}

#[derive(Debug, Clone)]
struct ScheduleEntry {
    axis: PauliString,
    /// sign(θ)·Δ, the angle applied on branch 2.
    delta_angle: f64,
    /// Cumulative probabilities [p1, p1+p2].
    cut: [f64; 2],
    sign3: f64,
}

impl PaiSchedule {
    /// Decompose every term of `h` for step size `step_size`
    /// (`θ_j = 2 h_j · step_size`). Fails if Δ does not dominate every
    /// angle — the decomposition is never silently clamped.
    pub fn new(h: &Hamiltonian, step_size: f64, delta: f64) -> Result<Self> {
        let mut max_theta: f64 = 0.0;
        for term in h.terms() {
            if !term.pauli.is_identity() {
                max_theta = max_theta.max(math::abs(2.0 * term.coeff * step_size));
            }
        }
        if max_theta > delta {
            return Err(Error::DeltaTooSmall { delta, max_theta });
        }
        let mut entries = Vec::with_capacity(h.n_terms());
        let mut gamma_per_step = 1.0;
        for term in h.terms() {
            if term.pauli.is_identity() {
                continue;
            }
            let theta = 2.0 * term.coeff * step_size;
            let coeffs = PaiCoefficients::new(theta, delta)?;
            let p = coeffs.probabilities();
            gamma_per_step *= coeffs.gamma;
            entries.push(ScheduleEntry {
                axis: term.pauli,
                delta_angle: if theta < 0.0 { -delta } else { delta },
                cut: [p[0], p[0] + p[1]],
                sign3: math::signum0(coeffs.a3),
            });
        }
        Ok(Self {
            n_qubits: h.n_qubits(),
            delta,
            entries,
            gamma_per_step,
        })
    }

    /// Interpolation angle Δ.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `Π_j γ(θ_j)` for one step; the full-circuit weight magnitude is
    /// this to the power of the step count.
    pub fn gamma_per_step(&self) -> f64 {
        self.gamma_per_step
    }

    /// `|Γ|` for a circuit of `k_steps` steps.
    pub fn gamma_abs(&self, k_steps: usize) -> f64 {
        math::exp(k_steps as f64 * math::ln(self.gamma_per_step))
    }

    /// Expected number of retained gates for `k_steps` steps,
    /// `k · Σ_j (p2 + p3)`.
    pub fn expected_gate_count(&self, k_steps: usize) -> f64 {
        let per_step: f64 = self.entries.iter().map(|e| 1.0 - e.cut[0]).sum();
        k_steps as f64 * per_step
    }

    /// Draw one circuit of `k_steps` steps.
    pub fn sample<R: Rng + ?Sized>(&self, k_steps: usize, rng: &mut R) -> SampledCircuit {
        let expect = self.expected_gate_count(k_steps);
        let mut circuit =
            RotationCircuit::with_capacity(self.n_qubits, (expect * 1.3) as usize + 8);
        let mut sign = 1.0;
        for _ in 0..k_steps {
            for entry in &self.entries {
                let u = rng.random::<f64>();
                if u < entry.cut[0] {
                    // identity branch: skip the gate
                } else if u < entry.cut[1] {
                    circuit.push(entry.axis, entry.delta_angle);
                } else {
                    circuit.push(entry.axis, math::PI);
                    sign *= entry.sign3;
                }
            }
        }
        let gate_count = circuit.len();
        SampledCircuit {
            circuit,
            gamma_signed: sign * self.gamma_abs(k_steps),
            gate_count,
        }
    }
}

/// First-order Trotter circuit for `exp(-iHt)` with `K` steps:
/// `[Π_j R_{P_j, 2 h_j t/K}]^K` in Hamiltonian construction order.
/// Identity terms contribute only a global phase and are skipped.
pub fn trotter_circuit(h: &Hamiltonian, t: f64, k_steps: usize) -> Result<RotationCircuit> {
    if k_steps < 1 {
        return Err(Error::InvalidStepCount(k_steps));
    }
    let delta_t = t / k_steps as f64;
    let gates: Vec<(PauliString, f64)> = h
        .terms()
        .iter()
        .filter(|term| !term.pauli.is_identity())
        .map(|term| (term.pauli, 2.0 * term.coeff * delta_t))
        .collect();
    let mut circuit = RotationCircuit::with_capacity(h.n_qubits(), gates.len() * k_steps);
    for _ in 0..k_steps {
        for &(axis, angle) in &gates {
            circuit.push(axis, angle);
        }
    }
    Ok(circuit)
}

/// Sample one interpolated circuit for `exp(-iHt)` with `K` steps.
pub fn sample_tepai_circuit<R: Rng + ?Sized>(
    h: &Hamiltonian,
    t: f64,
    k_steps: usize,
    delta: f64,
    rng: &mut R,
) -> Result<SampledCircuit> {
    if k_steps < 1 {
        return Err(Error::InvalidStepCount(k_steps));
    }
    let schedule = PaiSchedule::new(h, t / k_steps as f64, delta)?;
    Ok(schedule.sample(k_steps, rng))
}

/// Worst-case product-formula error on an expectation value:
/// `|S(t) - <O>^{(K)}_t| <= t² ‖O‖ ‖c‖_T / K`.
pub fn trotter_error_bound(h: &Hamiltonian, observable_norm: f64, t: f64, k_steps: usize) -> f64 {
    assert!(k_steps >= 1, "need at least one step");
    t * t * observable_norm * h.commutator_norm() / k_steps as f64
}

/// Large-K expected retained-gate count, `csc(Δ)(3 - cos Δ)‖H‖₁ t`.
pub fn expected_gate_count_asymptotic(l1_norm: f64, t: f64, delta: f64) -> f64 {
    (3.0 - math::cos(delta)) / math::sin(delta) * l1_norm * t
}

/// Large-K sampling-overhead factor, `exp(2 t ‖H‖₁ tan(Δ/2))`.
pub fn overhead_asymptotic(l1_norm: f64, t: f64, delta: f64) -> f64 {
    math::exp(2.0 * t * l1_norm * math::tan(delta / 2.0))
}

/// Exact finite-K weight magnitude `Γ = (Π_j γ(2 h_j t/K))^K`;
/// converges to [`overhead_asymptotic`] as K grows.
pub fn gamma_exact(h: &Hamiltonian, t: f64, k_steps: usize, delta: f64) -> Result<f64> {
    if k_steps < 1 {
        return Err(Error::InvalidStepCount(k_steps));
    }
    let schedule = PaiSchedule::new(h, t / k_steps as f64, delta)?;
    Ok(schedule.gamma_abs(k_steps))
}

/// The Δ that pins the asymptotic overhead at `exp(q)`:
/// `Δ = 2 arctan(q / (2 ‖H‖₁ t))`.
pub fn delta_for_overhead(q: f64, l1_norm: f64, t: f64) -> f64 {
    assert!(
        q > 0.0 && l1_norm > 0.0 && t > 0.0,
        "arguments must be positive"
    );
    2.0 * math::atan(q / (2.0 * l1_norm * t))
}

/// Uniform time grid with a shared Trotter step size.
///
/// `δ = t_total / k_steps_total` is constant; the circuit for time point
/// `t_s = s·t_total/n_t` uses `K_s = round(t_s/δ)` steps, so early
/// points are strict prefixes of later ones and every gate angle is the
/// same at all time points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_total: f64,
    n_t: usize,
    k_steps_total: usize,
}

impl TimeGrid {
    /// Validate and build. Requires `k_steps_total >= n_t` so every time
    /// point gets at least one step.
    pub fn new(t_total: f64, n_t: usize, k_steps_total: usize) -> Result<Self> {
        if !t_total.is_finite() || t_total <= 0.0 || n_t < 1 {
            return Err(Error::InvalidPlan(alloc::format!(
                "time grid needs t_total > 0 and n_t >= 1, got t_total={t_total}, n_t={n_t}"
            )));
        }
        if k_steps_total < n_t {
            return Err(Error::InvalidPlan(alloc::format!(
                "k_steps_total={k_steps_total} must be >= n_t={n_t} for a constant step size"
            )));
        }
        Ok(Self {
            t_total,
            n_t,
            k_steps_total,
        })
    }

    /// Total evolution time.
    pub fn t_total(&self) -> f64 {
        self.t_total
    }

    /// Number of time points.
    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Total Trotter steps at the last time point.
    pub fn k_steps_total(&self) -> usize {
        self.k_steps_total
    }

    /// Time spacing `t_total / n_t`.
    pub fn dt(&self) -> f64 {
        self.t_total / self.n_t as f64
    }

    /// Constant Trotter step `δ = t_total / k_steps_total`.
    pub fn step_size(&self) -> f64 {
        self.t_total / self.k_steps_total as f64
    }

    /// Nominal time of point `s` (1-based): `s · t_total / n_t`.
    pub fn time_at(&self, s: usize) -> f64 {
        debug_assert!((1..=self.n_t).contains(&s));
        s as f64 * self.t_total / self.n_t as f64
    }

    /// Step count of point `s`: `round(t_s / δ)`.
    pub fn steps_at(&self, s: usize) -> usize {
        debug_assert!((1..=self.n_t).contains(&s));
        math::round(s as f64 * self.k_steps_total as f64 / self.n_t as f64) as usize
    }
}
