//! Dense complex-amplitude statevector simulator.
//!
//! Holds all 2^N amplitudes and applies Pauli rotations by pairing the
//! amplitude indices that differ on the rotation axis's X/Y support; no
//! 2^N × 2^N matrix is ever formed. The action of a Pauli string P on a
//! basis state is
//!
//! ```text
//!   P |b> = i^{n_Y} (-1)^{popcount(b & z_mask)} |b XOR x_mask>
//! ```
//!
//! which makes `R_{P,θ} = cos(θ/2) I - i sin(θ/2) P` a 2×2 mix over each
//! `(b, b XOR x_mask)` pair with per-index sign factors.
//!
//! Measurement is terminal: the full protocol always ends a circuit in a
//! basis-rotated computational-basis sample, so no post-measurement
//! state is produced.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::circuit::RotationCircuit;
use crate::math;
use crate::pauli::PauliString;
use crate::{Error, Result, C64};

/// Norm drift considered an internal-consistency failure at measurement.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-6;

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Measure X: rotate by a Hadamard first.
    X,
    /// Measure Y: rotate by H·S† first.
    Y,
    /// Measure Z: computational basis, no rotation.
    Z,
}

impl Basis {
    /// Letter form used in snapshot files.
    pub fn letter(self) -> char {
        match self {
            Basis::X => 'X',
            Basis::Y => 'Y',
            Basis::Z => 'Z',
        }
    }

    /// Parse a letter form.
    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'X' => Some(Basis::X),
            'Y' => Some(Basis::Y),
            'Z' => Some(Basis::Z),
            _ => None,
        }
    }
}

/// Stochastic depolarizing-noise parameters: after every gate a uniform
/// non-identity Pauli on the gate's support is inserted with probability
/// `p1` (single-qubit support) or `p2` (two-qubit support).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// Error probability after single-qubit gates.
    pub p1: f64,
    /// Error probability after two-qubit gates.
    pub p2: f64,
}

impl NoiseModel {
    /// Validate probabilities.
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for p in [p1, p2] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Ok(Self { p1, p2 })
    }

    fn rate_for_support(&self, weight: usize) -> f64 {
        if weight <= 1 {
            self.p1
        } else {
            self.p2
        }
    }
}

/// Dense statevector on `n_qubits` (bit k of an amplitude index is
/// qubit k).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

const I_POWERS: [C64; 4] = [
    C64::new(1.0, 0.0),
    C64::new(0.0, 1.0),
    C64::new(-1.0, 0.0),
    C64::new(0.0, -1.0),
];

impl StateVector {
    /// The all-zeros computational basis state.
    pub fn zero(n_qubits: usize) -> Self {
        assert!((1..=30).contains(&n_qubits), "unsupported width {n_qubits}");
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    /// Product state from a per-qubit specification over `{0, 1, +, -}`;
    /// character 0 of the string is qubit 0.
    pub fn product(spec: &str) -> Result<Self> {
        let n = spec.chars().count();
        if n == 0 || n > 30 {
            return Err(Error::InvalidInitialState(alloc::format!(
                "product state must have 1..=30 qubits, got {n}"
            )));
        }
        let inv_sqrt2 = 1.0 / math::sqrt(2.0);
        // (amp for bit 0, amp for bit 1) per qubit
        let mut local = Vec::with_capacity(n);
        for c in spec.chars() {
            local.push(match c {
                '0' => (1.0, 0.0),
                '1' => (0.0, 1.0),
                '+' => (inv_sqrt2, inv_sqrt2),
                '-' => (inv_sqrt2, -inv_sqrt2),
                other => {
                    return Err(Error::InvalidInitialState(alloc::format!(
                        "unknown product letter {other:?}; expected one of 0, 1, +, -"
                    )));
                }
            });
        }
        let mut amps = Vec::with_capacity(1 << n);
        for b in 0u64..(1 << n) {
            let mut a = 1.0;
            for (k, &(a0, a1)) in local.iter().enumerate() {
                a *= if b >> k & 1 == 0 { a0 } else { a1 };
                if a == 0.0 {
                    break;
                }
            }
            amps.push(C64::new(a, 0.0));
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// Adopt raw amplitudes (must already be normalized to 1e-9).
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        assert_eq!(amps.len(), 1 << n_qubits, "amplitude count mismatch");
        let state = Self { n_qubits, amps };
        let norm = state.norm_sqr();
        if math::abs(norm - 1.0) > 1e-9 {
            return Err(Error::NormDrift {
                norm_sqr: norm,
                tolerance: 1e-9,
            });
        }
        Ok(state)
    }

    /// Register width.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Raw amplitudes (bit k of the index is qubit k).
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Σ |amplitude|².
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Apply `R_{P,θ} = exp(-i θ P / 2)` in place.
    pub fn apply_rotation(&mut self, axis: &PauliString, angle: f64) {
        assert!(!axis.is_identity(), "rotation axis must be non-identity");
        assert_eq!(axis.n_qubits(), self.n_qubits, "axis width mismatch");
        let x = axis.x_mask();
        let z = axis.z_mask();
        let c = math::cos(angle / 2.0);
        let s = math::sin(angle / 2.0);
        // -i sin(θ/2) · i^{n_Y}
        let m = C64::new(0.0, -s) * I_POWERS[axis.y_count() % 4];
        if x == 0 {
            for (b, amp) in self.amps.iter_mut().enumerate() {
                let sign = if (b as u64 & z).count_ones() & 1 == 0 {
                    1.0
                } else {
                    -1.0
                };
                *amp *= C64::new(c, 0.0) + m * sign;
            }
        } else {
            let pos = x.trailing_zeros() as u64;
            let low = (1u64 << pos) - 1;
            for i in 0..(self.amps.len() as u64 / 2) {
                let b = (i & !low) << 1 | (i & low);
                let b2 = b ^ x;
                let sign_b = if (b & z).count_ones() & 1 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let sign_b2 = if (b2 & z).count_ones() & 1 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let a = self.amps[b as usize];
                let a2 = self.amps[b2 as usize];
                self.amps[b as usize] = a * c + a2 * (m * sign_b2);
                self.amps[b2 as usize] = a2 * c + a * (m * sign_b);
            }
        }
    }

    /// Apply a Pauli string in place (norm preserved exactly).
    pub fn apply_pauli(&mut self, p: &PauliString) {
        assert_eq!(p.n_qubits(), self.n_qubits, "pauli width mismatch");
        if p.is_identity() {
            return;
        }
        let x = p.x_mask();
        let z = p.z_mask();
        let phase = I_POWERS[p.y_count() % 4];
        if x == 0 {
            for (b, amp) in self.amps.iter_mut().enumerate() {
                if (b as u64 & z).count_ones() & 1 == 1 {
                    *amp = -*amp;
                }
            }
        } else {
            let pos = x.trailing_zeros() as u64;
            let low = (1u64 << pos) - 1;
            for i in 0..(self.amps.len() as u64 / 2) {
                let b = (i & !low) << 1 | (i & low);
                let b2 = b ^ x;
                let sign_b = if (b & z).count_ones() & 1 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let sign_b2 = if (b2 & z).count_ones() & 1 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let a = self.amps[b as usize];
                // (Pψ)[b2] = phase · sign_b · ψ[b], and vice versa.
                self.amps[b as usize] = self.amps[b2 as usize] * (phase * sign_b2);
                self.amps[b2 as usize] = a * (phase * sign_b);
            }
        }
    }

    /// Apply a 2×2 matrix `[[m00, m01], [m10, m11]]` to one qubit.
    pub fn apply_single_qubit(&mut self, qubit: usize, m: [C64; 4]) {
        assert!(qubit < self.n_qubits, "qubit out of range");
        let pos = qubit as u64;
        let low = (1u64 << pos) - 1;
        let bit = 1u64 << pos;
        for i in 0..(self.amps.len() as u64 / 2) {
            let b0 = (i & !low) << 1 | (i & low);
            let b1 = b0 | bit;
            let a0 = self.amps[b0 as usize];
            let a1 = self.amps[b1 as usize];
            self.amps[b0 as usize] = m[0] * a0 + m[1] * a1;
            self.amps[b1 as usize] = m[2] * a0 + m[3] * a1;
        }
    }

    /// `<ψ| P |ψ>` (real since P is Hermitian).
    pub fn expectation_pauli(&self, p: &PauliString) -> f64 {
        assert_eq!(p.n_qubits(), self.n_qubits, "pauli width mismatch");
        let x = p.x_mask();
        let z = p.z_mask();
        let phase = I_POWERS[p.y_count() % 4];
        let mut acc = C64::new(0.0, 0.0);
        for (b, amp) in self.amps.iter().enumerate() {
            let b = b as u64;
            let sign = if (b & z).count_ones() & 1 == 0 {
                1.0
            } else {
                -1.0
            };
            acc += self.amps[(b ^ x) as usize].conj() * (phase * sign) * *amp;
        }
        acc.re
    }

    /// Apply every gate of a rotation circuit.
    pub fn apply_circuit(&mut self, circuit: &RotationCircuit) {
        for gate in circuit.gates() {
            self.apply_rotation(&gate.axis, gate.angle);
        }
    }

    /// Apply a circuit with a stochastic depolarizing insertion after
    /// each gate.
    pub fn apply_circuit_noisy<R: Rng + ?Sized>(
        &mut self,
        circuit: &RotationCircuit,
        noise: &NoiseModel,
        rng: &mut R,
    ) {
        for gate in circuit.gates() {
            self.apply_rotation(&gate.axis, gate.angle);
            let support = gate.axis.support();
            let p = noise.rate_for_support(support.len());
            self.apply_depolarizing(&support, p, rng)
                .expect("validated noise rate");
        }
    }

    /// With probability `p`, apply one Pauli drawn uniformly from the
    /// `4^k - 1` non-identity strings on `support` (stochastic
    /// trajectory unraveling of the depolarizing channel).
    pub fn apply_depolarizing<R: Rng + ?Sized>(
        &mut self,
        support: &[usize],
        p: f64,
        rng: &mut R,
    ) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if p == 0.0 || rng.random::<f64>() >= p {
            return Ok(());
        }
        let k = support.len();
        debug_assert!((1..=2).contains(&k), "depolarizing support of size {k}");
        let code = rng.random_range(1..4u32.pow(k as u32));
        let mut err = PauliString::identity(self.n_qubits);
        let mut c = code;
        for &q in support {
            use crate::pauli::Pauli;
            match c % 4 {
                1 => err.set(q, Pauli::X),
                2 => err.set(q, Pauli::Y),
                3 => err.set(q, Pauli::Z),
                _ => {}
            }
            c /= 4;
        }
        self.apply_pauli(&err);
        Ok(())
    }

    /// Rotate each qubit into its measurement basis and sample one
    /// bitstring from |amplitude|² (terminal: consumes the state). When
    /// `noise` is set, each non-trivial basis-change gate is followed by
    /// a single-qubit depolarizing insertion at rate `p1`.
    pub fn measure_in_bases<R: Rng + ?Sized>(
        mut self,
        bases: &[Basis],
        noise: Option<&NoiseModel>,
        rng: &mut R,
    ) -> Result<u64> {
        assert_eq!(bases.len(), self.n_qubits, "basis list width mismatch");
        let inv_sqrt2 = 1.0 / math::sqrt(2.0);
        let h = [
            C64::new(inv_sqrt2, 0.0),
            C64::new(inv_sqrt2, 0.0),
            C64::new(inv_sqrt2, 0.0),
            C64::new(-inv_sqrt2, 0.0),
        ];
        // H·S†: maps Y eigenstates onto the computational basis.
        let hs_dag = [
            C64::new(inv_sqrt2, 0.0),
            C64::new(0.0, -inv_sqrt2),
            C64::new(inv_sqrt2, 0.0),
            C64::new(0.0, inv_sqrt2),
        ];
        for (q, basis) in bases.iter().enumerate() {
            match basis {
                Basis::Z => continue,
                Basis::X => self.apply_single_qubit(q, h),
                Basis::Y => self.apply_single_qubit(q, hs_dag),
            }
            if let Some(noise) = noise {
                self.apply_depolarizing(&[q], noise.p1, rng)?;
            }
        }

        let total = self.norm_sqr();
        if math::abs(total - 1.0) > NORM_DRIFT_TOLERANCE {
            return Err(Error::NormDrift {
                norm_sqr: total,
                tolerance: NORM_DRIFT_TOLERANCE,
            });
        }
        let r = rng.random::<f64>() * total;
        let mut acc = 0.0;
        for (b, amp) in self.amps.iter().enumerate() {
            acc += amp.norm_sqr();
            if r < acc {
                return Ok(b as u64);
            }
        }
        Ok(self.amps.len() as u64 - 1)
    }
}
