//! Ordered lists of Pauli rotation gates.

use alloc::vec::Vec;

use crate::math;
use crate::pauli::PauliString;

/// One multi-qubit Pauli rotation `R_{P,θ} = exp(-i θ P / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationGate {
    /// Rotation axis; never the identity string.
    pub axis: PauliString,
    /// Angle in radians, normalized to `(-π, π]`.
    pub angle: f64,
}

/// A circuit of Pauli rotations on a fixed register.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RotationCircuit {
    n_qubits: usize,
    gates: Vec<RotationGate>,
}

/// Map an angle to the equivalent value in `(-π, π]` (equality as a
/// channel; global phase may differ).
pub fn normalize_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * math::PI;
    let mut t = theta - two_pi * math::round(theta / two_pi);
    if t <= -math::PI {
        t += two_pi;
    }
    t
}

impl RotationCircuit {
    /// Empty circuit on `n_qubits` sites.
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    /// Empty circuit with room for `capacity` gates.
    pub fn with_capacity(n_qubits: usize, capacity: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::with_capacity(capacity),
        }
    }

    /// Append a rotation. Panics on an identity axis or width mismatch:
    /// both are caller bugs.
    pub fn push(&mut self, axis: PauliString, angle: f64) {
        assert!(!axis.is_identity(), "rotation axis must be non-identity");
        assert_eq!(axis.n_qubits(), self.n_qubits, "axis width mismatch");
        self.gates.push(RotationGate {
            axis,
            angle: normalize_angle(angle),
        });
    }

    /// Register width.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The gates in application order.
    pub fn gates(&self) -> &[RotationGate] {
        &self.gates
    }

    /// Number of gates.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    /// True when the circuit has no gates.
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Circuit depth: the length of the longest path through gates whose
    /// supports share a qubit. Computed with a per-qubit frontier — each
    /// gate lands on layer `1 + max(frontier over its support)`.
    pub fn depth(&self) -> usize {
        let mut frontier = alloc::vec![0usize; self.n_qubits];
        let mut depth = 0;
        for gate in &self.gates {
            let mut layer = 0;
            let mut m = gate.axis.x_mask() | gate.axis.z_mask();
            while m != 0 {
                let q = m.trailing_zeros() as usize;
                m &= m - 1;
                layer = layer.max(frontier[q]);
            }
            let layer = layer + 1;
            let mut m = gate.axis.x_mask() | gate.axis.z_mask();
            while m != 0 {
                let q = m.trailing_zeros() as usize;
                m &= m - 1;
                frontier[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    #[test]
    fn depth_of_disjoint_gates_is_one() {
        let n = 5;
        let mut c = RotationCircuit::new(n);
        for q in 0..n {
            c.push(PauliString::single(n, q, Pauli::X), 0.3);
        }
        assert_eq!(c.depth(), 1);
        assert_eq!(c.len(), n);
    }

    #[test]
    fn depth_of_sequential_gates_is_count() {
        let mut c = RotationCircuit::new(2);
        for _ in 0..7 {
            c.push(PauliString::single(2, 0, Pauli::Z), 0.1);
        }
        assert_eq!(c.depth(), 7);
    }

    #[test]
    fn depth_respects_shared_qubits() {
        let n = 3;
        let mut c = RotationCircuit::new(n);
        let xx01: PauliString = "XXI".parse().unwrap();
        let xx12: PauliString = "IXX".parse().unwrap();
        c.push(xx01, 0.1);
        c.push(xx12, 0.1); // shares qubit 1 -> layer 2
        c.push(PauliString::single(n, 0, Pauli::Z), 0.1); // qubit 0 free at layer 2
        assert_eq!(c.depth(), 2);
    }

    #[test]
    fn empty_circuit_depth_zero() {
        assert_eq!(RotationCircuit::new(3).depth(), 0);
    }

    #[test]
    #[should_panic(expected = "non-identity")]
    fn identity_axis_rejected() {
        let mut c = RotationCircuit::new(2);
        c.push(PauliString::identity(2), 0.5);
    }

    #[test]
    fn angles_normalized_to_half_open_pi() {
        let mut c = RotationCircuit::new(1);
        let x = PauliString::single(1, 0, Pauli::X);
        c.push(x, 3.0 * math::PI);
        c.push(x, -math::PI);
        c.push(x, 2.0 * math::PI);
        assert!((c.gates()[0].angle - math::PI).abs() < 1e-12);
        assert!((c.gates()[1].angle - math::PI).abs() < 1e-12);
        assert!(c.gates()[2].angle.abs() < 1e-12);
        for g in c.gates() {
            assert!(g.angle > -math::PI && g.angle <= math::PI);
        }
    }
}
