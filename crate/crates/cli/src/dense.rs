//! Slow dense-matrix reference implementations.
//!
//! Everything is built from explicit 2×2 letter matrices and Kronecker
//! products — an arithmetic path fully independent of the bitmask
//! statevector kernels — and exists to cross-check them in the
//! validation suite and the acceptance tests. Dimensions stay tiny
//! (1–3 qubits), so clarity wins over speed throughout.

use gapscope_core::hamiltonian::Hamiltonian;
use gapscope_core::pauli::{Pauli, PauliString};
use gapscope_core::C64;

/// 2×2 matrix of one Pauli letter, row-major.
pub fn letter_matrix(p: Pauli) -> [C64; 4] {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match p {
        Pauli::I => [one, zero, zero, one],
        Pauli::X => [zero, one, one, zero],
        Pauli::Y => [zero, -i, i, zero],
        Pauli::Z => [one, zero, zero, -one],
    }
}

/// Kronecker product of square matrices (row-major).
pub fn kron(a: &[C64], da: usize, b: &[C64], db: usize) -> Vec<C64> {
    let d = da * db;
    let mut out = vec![C64::new(0.0, 0.0); d * d];
    for ia in 0..da {
        for ja in 0..da {
            for ib in 0..db {
                for jb in 0..db {
                    out[(ia * db + ib) * d + (ja * db + jb)] = a[ia * da + ja] * b[ib * db + jb];
                }
            }
        }
    }
    out
}

/// Dense matrix of a Pauli string (qubit 0 = lowest index bit).
pub fn pauli_matrix(p: &PauliString) -> Vec<C64> {
    let mut m = vec![C64::new(1.0, 0.0)];
    let mut dim = 1;
    for k in (0..p.n_qubits()).rev() {
        let lm = letter_matrix(p.letter(k));
        m = kron(&m, dim, &lm, 2);
        dim *= 2;
    }
    m
}

/// Dense `R_{P,θ} = cos(θ/2) I - i sin(θ/2) P`.
pub fn rotation_matrix(p: &PauliString, theta: f64) -> Vec<C64> {
    let dim = 1usize << p.n_qubits();
    let pm = pauli_matrix(p);
    let c = C64::new((theta / 2.0).cos(), 0.0);
    let ms = C64::new(0.0, -(theta / 2.0).sin());
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for col in 0..dim {
            let ident = if r == col {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            out[r * dim + col] = c * ident + ms * pm[r * dim + col];
        }
    }
    out
}

/// `y = M x`.
pub fn matvec(m: &[C64], x: &[C64]) -> Vec<C64> {
    let dim = x.len();
    let mut y = vec![C64::new(0.0, 0.0); dim];
    for r in 0..dim {
        let mut acc = C64::new(0.0, 0.0);
        for c in 0..dim {
            acc += m[r * dim + c] * x[c];
        }
        y[r] = acc;
    }
    y
}

/// `C = A B` for square matrices.
pub fn matmul(a: &[C64], b: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

/// Superoperator of a unitary under `vec(ρ) = Σ ρ_ij |i>|j>`:
/// `S = U ⊗ conj(U)`.
pub fn superop(u: &[C64], dim: usize) -> Vec<C64> {
    let uc: Vec<C64> = u.iter().map(|x| x.conj()).collect();
    kron(u, dim, &uc, dim)
}

/// Identity superoperator on dim²-vectors.
pub fn superop_identity(dim: usize) -> Vec<C64> {
    let sdim = dim * dim;
    let mut m = vec![C64::new(0.0, 0.0); sdim * sdim];
    for i in 0..sdim {
        m[i * sdim + i] = C64::new(1.0, 0.0);
    }
    m
}

/// `<ψ| O |ψ>` with a dense observable.
pub fn expectation(o: &[C64], psi: &[C64]) -> f64 {
    let opsi = matvec(o, psi);
    psi.iter().zip(&opsi).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Statevector after the K-step first-order product formula applied to
/// `psi0`, every gate as an explicit dense rotation.
pub fn trotter_state(h: &Hamiltonian, t: f64, k_steps: usize, psi0: &[C64]) -> Vec<C64> {
    let delta_t = t / k_steps as f64;
    let mut psi = psi0.to_vec();
    for _ in 0..k_steps {
        for term in h.terms() {
            if term.pauli.is_identity() {
                continue;
            }
            let u = rotation_matrix(&term.pauli, 2.0 * term.coeff * delta_t);
            psi = matvec(&u, &psi);
        }
    }
    psi
}

/// `<O>` after dense Trotter evolution from `|0…0>`.
pub fn trotter_expectation_from_zero(
    h: &Hamiltonian,
    t: f64,
    k_steps: usize,
    o: &PauliString,
) -> f64 {
    let dim = 1usize << h.n_qubits();
    let mut psi0 = vec![C64::new(0.0, 0.0); dim];
    psi0[0] = C64::new(1.0, 0.0);
    let psi = trotter_state(h, t, k_steps, &psi0);
    expectation(&pauli_matrix(o), &psi)
}
