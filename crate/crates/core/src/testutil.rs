//! Dense-matrix oracles for unit tests.
//!
//! Everything here builds operators the slow, obviously-correct way —
//! Kronecker products of explicit 2×2 matrices — so the fast bitmask
//! kernels are checked against an independent arithmetic path.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::math;
use crate::pauli::{Pauli, PauliString};
use crate::statevector::StateVector;
use crate::C64;

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

/// Dense matrix of a Pauli string. Qubit 0 is the lowest index bit, so
/// the Kronecker chain runs from the highest site down.
pub fn pauli_dense(p: &PauliString) -> Vec<C64> {
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
pub fn rotation_dense(p: &PauliString, theta: f64) -> Vec<C64> {
    let dim = 1usize << p.n_qubits();
    let pm = pauli_dense(p);
    let c = C64::new(math::cos(theta / 2.0), 0.0);
    let ms = C64::new(0.0, -math::sin(theta / 2.0));
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let ident = if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            out[i * dim + j] = c * ident + ms * pm[i * dim + j];
        }
    }
    out
}

pub fn matvec(m: &[C64], x: &[C64]) -> Vec<C64> {
    let dim = x.len();
    let mut y = vec![C64::new(0.0, 0.0); dim];
    for i in 0..dim {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..dim {
            acc += m[i * dim + j] * x[j];
        }
        y[i] = acc;
    }
    y
}

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

/// Superoperator of a unitary under the vec(ρ) = Σ ρ_ij |i>|j>
/// convention: S = U ⊗ conj(U), acting on dim²-vectors.
pub fn superop(u: &[C64], dim: usize) -> Vec<C64> {
    let uc: Vec<C64> = u.iter().map(|x| x.conj()).collect();
    kron(u, dim, &uc, dim)
}

pub fn superop_identity(dim: usize) -> Vec<C64> {
    let sdim = dim * dim;
    let mut m = vec![C64::new(0.0, 0.0); sdim * sdim];
    for i in 0..sdim {
        m[i * sdim + i] = C64::new(1.0, 0.0);
    }
    m
}

pub fn all_nonidentity_paulis(n: usize) -> Vec<PauliString> {
    let mut out = Vec::new();
    for code in 1..4usize.pow(n as u32) {
        let mut s = PauliString::identity(n);
        let mut c = code;
        for k in 0..n {
            match c % 4 {
                1 => s.set(k, Pauli::X),
                2 => s.set(k, Pauli::Y),
                3 => s.set(k, Pauli::Z),
                _ => {}
            }
            c /= 4;
        }
        out.push(s);
    }
    out
}

pub fn random_nonidentity_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliString {
    loop {
        let mut s = PauliString::identity(n);
        for k in 0..n {
            match rng.random_range(0..4) {
                1 => s.set(k, Pauli::X),
                2 => s.set(k, Pauli::Y),
                3 => s.set(k, Pauli::Z),
                _ => {}
            }
        }
        if !s.is_identity() {
            return s;
        }
    }
}

pub fn random_angle<R: Rng>(rng: &mut R) -> f64 {
    (rng.random::<f64>() * 2.0 - 1.0) * math::PI
}

pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> StateVector {
    let dim = 1usize << n;
    let mut amps: Vec<C64> = (0..dim)
        .map(|_| {
            C64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        })
        .collect();
    let norm = math::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(n, amps).unwrap()
}
