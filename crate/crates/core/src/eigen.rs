//! Exact diagonalization of small Hamiltonians and the no-error
//! time-signal oracle built on it.
//!
//! A Pauli string is a signed permutation in the computational basis, so
//! the dense matrix is assembled in O(terms · 2^N) and handed to the
//! symmetric (real input) or Hermitian eigensolver. The eigenbasis then
//! gives `S(t) = <ψ(t)| O |ψ(t)>` with no discretization error: the
//! amplitudes just pick up `exp(-i E_α t)` phases.

use alloc::vec;
use alloc::vec::Vec;

use crate::hamiltonian::Hamiltonian;
use crate::linalg;
use crate::math;
use crate::pauli::PauliString;
use crate::statevector::StateVector;
use crate::{Error, Result, C64};

/// Largest width accepted for a dense 2^N × 2^N solve.
pub const MAX_DIAG_QUBITS: usize = 14;

/// Ascending eigenvalues with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    n_qubits: usize,
    eigenvalues: Vec<f64>,
    /// Column-major; column α is the eigenvector of `eigenvalues[α]`.
    eigenvectors: Vec<C64>,
}

impl EigenDecomposition {
    /// Register width.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Ascending eigenvalues `E_α`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Gap `|E_b - E_a|` between two levels (indices count multiplicity).
    pub fn gap(&self, a: usize, b: usize) -> f64 {
        math::abs(self.eigenvalues[b] - self.eigenvalues[a])
    }

    /// The eigenvector of level `alpha` as a state.
    pub fn eigenstate(&self, alpha: usize) -> StateVector {
        let dim = 1usize << self.n_qubits;
        let amps = self.eigenvectors[alpha * dim..(alpha + 1) * dim].to_vec();
        StateVector::from_amplitudes(self.n_qubits, amps).expect("eigenvector is normalized")
    }

    /// Normalized real-weighted superposition `Σ w_k |E_{levels[k]}>`.
    pub fn superposition(&self, levels: &[usize], weights: &[f64]) -> Result<StateVector> {
        if levels.is_empty() || levels.len() != weights.len() {
            return Err(Error::InvalidInitialState(alloc::format!(
                "superposition needs matching nonempty level/weight lists, got {} levels and {} weights",
                levels.len(),
                weights.len()
            )));
        }
        let dim = 1usize << self.n_qubits;
        for &l in levels {
            if l >= dim {
                return Err(Error::InvalidInitialState(alloc::format!(
                    "level index {l} out of range for {dim} eigenstates"
                )));
            }
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        for (&l, &w) in levels.iter().zip(weights) {
            let col = &self.eigenvectors[l * dim..(l + 1) * dim];
            for (a, v) in amps.iter_mut().zip(col) {
                *a += v * w;
            }
        }
        let norm = math::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if norm < 1e-12 {
            return Err(Error::InvalidInitialState(
                "superposition weights cancel to the zero vector".into(),
            ));
        }
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::from_amplitudes(self.n_qubits, amps)
    }

    /// True when level `alpha` is within `tol · spectral_range` of a
    /// neighboring level — a superposition built on it picks an
    /// arbitrary basis inside the degenerate manifold.
    pub fn is_degenerate(&self, alpha: usize, tol: f64) -> bool {
        let n = self.eigenvalues.len();
        let range = self.eigenvalues[n - 1] - self.eigenvalues[0];
        let scale = if range > 0.0 { range } else { 1.0 };
        let e = self.eigenvalues[alpha];
        let near = |other: usize| math::abs(self.eigenvalues[other] - e) < tol * scale;
        (alpha > 0 && near(alpha - 1)) || (alpha + 1 < n && near(alpha + 1))
    }
}

/// Dense matrix of `H` in the computational basis, row-major.
pub fn dense_matrix(h: &Hamiltonian) -> Vec<C64> {
    let n = h.n_qubits();
    let dim = 1usize << n;
    let mut m = vec![C64::new(0.0, 0.0); dim * dim];
    let i_powers = [
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, -1.0),
    ];
    for term in h.terms() {
        let x = term.pauli.x_mask();
        let z = term.pauli.z_mask();
        let phase = i_powers[term.pauli.y_count() % 4] * term.coeff;
        for b in 0..dim as u64 {
            let sign = if (b & z).count_ones() & 1 == 0 {
                1.0
            } else {
                -1.0
            };
            let row = (b ^ x) as usize;
            m[row * dim + b as usize] += phase * sign;
        }
    }
    m
}

/// Diagonalize `H` exactly (dense 2^N solve, N ≤ [`MAX_DIAG_QUBITS`]).
pub fn eigendecompose(h: &Hamiltonian) -> Result<EigenDecomposition> {
    let n = h.n_qubits();
    if n > MAX_DIAG_QUBITS {
        return Err(Error::Capacity {
            what: "eigendecompose",
            n_qubits: n,
            max_qubits: MAX_DIAG_QUBITS,
        });
    }
    let dim = 1usize << n;
    let m = dense_matrix(h);
    // Even-Y terms give an exactly real matrix; use the faster real path.
    let is_real = m.iter().all(|v| v.im == 0.0);
    let (eigenvalues, eigenvectors) = if is_real {
        let a: Vec<f64> = m.iter().map(|v| v.re).collect();
        let eig = linalg::symmetric_eigen(a, dim);
        let vecs = eig.eigenvectors.iter().map(|&x| C64::new(x, 0.0)).collect();
        (eig.eigenvalues, vecs)
    } else {
        let eig = linalg::hermitian_eigen(m, dim);
        (eig.eigenvalues, eig.eigenvectors)
    };
    Ok(EigenDecomposition {
        n_qubits: n,
        eigenvalues,
        eigenvectors,
    })
}

/// Exact time signal `S(t_n) = <ψ(t_n)| O |ψ(t_n)>` for the given
/// initial state, via the eigenbasis phases. No product-formula error;
/// this is the oracle the circuit paths are checked against.
pub fn exact_expectation_series(
    eig: &EigenDecomposition,
    initial: &StateVector,
    observable: &PauliString,
    times: &[f64],
) -> Vec<f64> {
    assert_eq!(initial.n_qubits(), eig.n_qubits, "state width mismatch");
    assert_eq!(
        observable.n_qubits(),
        eig.n_qubits,
        "observable width mismatch"
    );
    let dim = 1usize << eig.n_qubits;
    // c_α = <E_α | ψ0>
    let mut coeffs = vec![C64::new(0.0, 0.0); dim];
    for (alpha, c) in coeffs.iter_mut().enumerate() {
        let col = &eig.eigenvectors[alpha * dim..(alpha + 1) * dim];
        *c = col
            .iter()
            .zip(initial.amplitudes())
            .map(|(v, a)| v.conj() * a)
            .sum();
    }
    let mut out = Vec::with_capacity(times.len());
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for &t in times {
        for a in &mut amps {
            *a = C64::new(0.0, 0.0);
        }
        for (alpha, c) in coeffs.iter().enumerate() {
            if c.norm_sqr() < 1e-28 {
                continue;
            }
            let phase = C64::new(
                math::cos(eig.eigenvalues[alpha] * t),
                -math::sin(eig.eigenvalues[alpha] * t),
            );
            let w = c * phase;
            let col = &eig.eigenvectors[alpha * dim..(alpha + 1) * dim];
            for (a, v) in amps.iter_mut().zip(col) {
                *a += v * w;
            }
        }
        let state = StateVector::from_amplitudes(eig.n_qubits, amps.clone())
            .expect("unitary evolution preserves the norm");
        out.push(state.expectation_pauli(observable));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Hamiltonian;
    use crate::pauli::Pauli;
    use crate::testutil;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_qubit_z() {
        let h = Hamiltonian::new(1, vec![(1.0, "Z".parse().unwrap())]);
        let eig = eigendecompose(&h).unwrap();
        assert!((eig.eigenvalues()[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_site_heisenberg_spectrum() {
        // XX + YY + ZZ on two qubits: singlet at -3, triplet at +1.
        let h = Hamiltonian::heisenberg_chain(2, 1.0, 1.0, 1.0).unwrap();
        let eig = eigendecompose(&h).unwrap();
        let expect = [-3.0, 1.0, 1.0, 1.0];
        for (got, want) in eig.eigenvalues().iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn reconstruction_residual_small() {
        // Random Hamiltonians, including odd-Y (genuinely complex) terms.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=4 {
            let terms: Vec<_> = (0..6)
                .map(|_| {
                    let p = testutil::random_nonidentity_pauli(n, &mut rng);
                    (rand::Rng::random::<f64>(&mut rng) * 2.0 - 1.0, p)
                })
                .collect();
            let h = Hamiltonian::new(n, terms);
            let eig = eigendecompose(&h).unwrap();
            let dim = 1usize << n;
            let m = dense_matrix(&h);
            let scale = h.l1_norm().max(1e-12);
            for alpha in 0..dim {
                let v = &eig.eigenvectors[alpha * dim..(alpha + 1) * dim];
                for r in 0..dim {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..dim {
                        acc += m[r * dim + c] * v[c];
                    }
                    let resid = (acc - v[r] * eig.eigenvalues[alpha]).norm();
                    assert!(resid < 1e-8 * scale, "residual {resid} at n={n}");
                }
            }
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let h = Hamiltonian::heisenberg_chain(15, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(eigendecompose(&h), Err(Error::Capacity { .. })));
    }

    #[test]
    fn stationary_state_gives_constant_signal() {
        let h = Hamiltonian::heisenberg_chain(3, 1.0, 1.0, 1.0).unwrap();
        let eig = eigendecompose(&h).unwrap();
        let psi = eig.eigenstate(0);
        let times: Vec<f64> = (0..20).map(|k| 0.3 * k as f64).collect();
        let z0 = PauliString::single(3, 0, Pauli::Z);
        let series = exact_expectation_series(&eig, &psi, &z0, &times);
        let first = series[0];
        for s in &series {
            assert!((s - first).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_observable_gives_unit_signal() {
        let h = Hamiltonian::heisenberg_chain(2, 1.0, 1.0, 1.0).unwrap();
        let eig = eigendecompose(&h).unwrap();
        let psi = StateVector::product("0+").unwrap();
        let times = [0.0, 0.7, 1.9];
        let series = exact_expectation_series(&eig, &psi, &PauliString::identity(2), &times);
        for s in series {
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn two_level_superposition_oscillates_at_the_gap() {
        // Anisotropic couplings so the spectrum is non-degenerate and
        // the eigenbasis (hence the cross element) is well defined.
        let h = Hamiltonian::heisenberg_chain(2, 1.0, 0.7, 0.3).unwrap();
        let eig = eigendecompose(&h).unwrap();
        // X₀ connects the ground state to level 1 across parity sectors.
        let x0 = PauliString::single(2, 0, Pauli::X);
        let psi = eig.superposition(&[0, 1], &[1.0, 1.0]).unwrap();
        let gap = eig.gap(0, 1);
        let dt = 0.05;
        let times: Vec<f64> = (0..400).map(|k| dt * k as f64).collect();
        let series = exact_expectation_series(&eig, &psi, &x0, &times);
        // S(t) = A + B cos(gap t + φ) satisfies the offset-free
        // three-term identity: S(t+dt) + S(t-dt) - 2cos(gap·dt) S(t)
        // is the same constant at every t (and only at this frequency).
        let lo = series.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(
            hi - lo > 1e-3,
            "cross element too small for the test to bite"
        );
        let k = 2.0 * (gap * dt).cos();
        let g0 = series[0] + series[2] - k * series[1];
        for w in series.windows(3) {
            let g = w[0] + w[2] - k * w[1];
            assert!((g - g0).abs() < 1e-9, "not a pure cosine at the gap");
        }
    }

    #[test]
    fn superposition_validation() {
        let h = Hamiltonian::heisenberg_chain(2, 1.0, 1.0, 1.0).unwrap();
        let eig = eigendecompose(&h).unwrap();
        assert!(eig.superposition(&[], &[]).is_err());
        assert!(eig.superposition(&[0], &[1.0, 1.0]).is_err());
        assert!(eig.superposition(&[99], &[1.0]).is_err());
        // Triplet levels 1..=3 are degenerate, the singlet is not.
        assert!(eig.is_degenerate(1, 1e-9));
        assert!(!eig.is_degenerate(0, 1e-9));
    }
}
