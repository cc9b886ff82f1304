//! Pauli-sum Hamiltonians and the benchmark spin-chain models.
//!
//! `H = Σ_j h_j P_j` with real coefficients and distinct Pauli strings;
//! duplicates are merged at construction so that the L¹ norm and product
//! formula gate counts are well defined.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::math;
use crate::pauli::{Pauli, PauliString};
use crate::{Error, Result};

/// One weighted Pauli term.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Term {
    /// Real coefficient `h_j`.
    pub coeff: f64,
    /// The Pauli string `P_j`.
    pub pauli: PauliString,
}

/// A sum of weighted Pauli strings on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<Term>,
}

impl Hamiltonian {
    /// Build from `(coefficient, string)` pairs.
    ///
    /// Duplicate strings are merged by summing coefficients (terms that
    /// cancel exactly are dropped); the first-occurrence order of the
    /// surviving strings is kept, since product-formula circuits follow
    /// construction order.
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Self {
        let mut order: Vec<PauliString> = Vec::new();
        let mut merged: BTreeMap<PauliString, f64> = BTreeMap::new();
        for (h, p) in terms {
            assert_eq!(p.n_qubits(), n_qubits, "term width mismatch");
            match merged.get_mut(&p) {
                Some(acc) => *acc += h,
                None => {
                    merged.insert(p, h);
                    order.push(p);
                }
            }
        }
        let terms = order
            .into_iter()
            .filter_map(|p| {
                let h = merged[&p];
                (h != 0.0).then_some(Term { coeff: h, pauli: p })
            })
            .collect();
        Self { n_qubits, terms }
    }

    /// Register width.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The merged terms, in construction order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of distinct terms.
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// True if some term is the identity string. Identity terms only
    /// shift the spectrum; they are harmless for gap estimation but
    /// callers may want to warn about them.
    pub fn has_identity_term(&self) -> bool {
        self.terms.iter().any(|t| t.pauli.is_identity())
    }

    /// `‖H‖₁ = Σ_j |h_j|`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| math::abs(t.coeff)).sum()
    }

    /// `‖c‖_T = Σ_{γ<β} ‖[h_γ P_γ, h_β P_β]‖`.
    ///
    /// The spectral norm of a commutator of two Pauli terms is
    /// `2|h_γ h_β|` when the strings anticommute and 0 when they
    /// commute, so the sum reduces to a pair scan with the symplectic
    /// commutation test.
    pub fn commutator_norm(&self) -> f64 {
        let mut total = 0.0;
        for (i, a) in self.terms.iter().enumerate() {
            for b in &self.terms[i + 1..] {
                if !a.pauli.commutes_with(&b.pauli) {
                    total += 2.0 * math::abs(a.coeff * b.coeff);
                }
            }
        }
        total
    }

    /// Open-boundary Heisenberg chain
    /// `H = Σ_i (Jx X_i X_{i+1} + Jy Y_i Y_{i+1} + Jz Z_i Z_{i+1})`.
    ///
    /// Terms are laid out even bonds first, then odd bonds, with the
    /// XX/YY/ZZ triple per bond: gates on disjoint bonds then pack into
    /// brickwork layers, which is how the circuit depth of one product
    /// step stays at 6 instead of growing with the chain length.
    pub fn heisenberg_chain(n_qubits: usize, jx: f64, jy: f64, jz: f64) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidModel {
                model: "heisenberg",
                n_qubits,
            });
        }
        let mut terms = Vec::with_capacity(3 * (n_qubits - 1));
        for parity in [0, 1] {
            for i in (parity..n_qubits - 1).step_by(2) {
                for (j, p) in [(jx, Pauli::X), (jy, Pauli::Y), (jz, Pauli::Z)] {
                    let mut s = PauliString::identity(n_qubits);
                    s.set(i, p);
                    s.set(i + 1, p);
                    terms.push((j, s));
                }
            }
        }
        Ok(Self::new(n_qubits, terms))
    }

    /// Open-boundary transverse-field Ising chain
    /// `H = -J Σ_k Z_k Z_{k+1} - d Σ_k X_k`.
    ///
    /// ZZ bonds come first (even, then odd), followed by the X fields.
    pub fn tfim_chain(n_qubits: usize, j: f64, d: f64) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidModel {
                model: "tfim",
                n_qubits,
            });
        }
        let mut terms = Vec::with_capacity(2 * n_qubits - 1);
        for parity in [0, 1] {
            for i in (parity..n_qubits - 1).step_by(2) {
                let mut s = PauliString::identity(n_qubits);
                s.set(i, Pauli::Z);
                s.set(i + 1, Pauli::Z);
                terms.push((-j, s));
            }
        }
        for k in 0..n_qubits {
            terms.push((-d, PauliString::single(n_qubits, k, Pauli::X)));
        }
        Ok(Self::new(n_qubits, terms))
    }
}

/// Hamiltonians serialize as a JSON array of terms,
/// `[{"coeff": 1.0, "pauli": "XXI"}, …]`; deserialization needs at
/// least one term to fix the register width and re-merges duplicates.
#[cfg(feature = "serde")]
impl serde::Serialize for Hamiltonian {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> core::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter())
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Hamiltonian {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> core::result::Result<Self, D::Error> {
        let terms = <Vec<Term> as serde::Deserialize>::deserialize(deserializer)?;
        let n = terms
            .first()
            .map(|t| t.pauli.n_qubits())
            .ok_or_else(|| serde::de::Error::custom("a Hamiltonian needs at least one term"))?;
        for t in &terms {
            if t.pauli.n_qubits() != n {
                return Err(serde::de::Error::custom("terms have mixed register widths"));
            }
        }
        Ok(Hamiltonian::new(
            n,
            terms.into_iter().map(|t| (t.coeff, t.pauli)),
        ))
    }
}

/// Benchmark model selector with its coupling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Isotropic-or-not Heisenberg chain.
    Heisenberg {
        /// XX coupling.
        jx: f64,
        /// YY coupling.
        jy: f64,
        /// ZZ coupling.
        jz: f64,
    },
    /// Transverse-field Ising chain.
    Tfim {
        /// ZZ coupling (enters as -J).
        j: f64,
        /// Transverse field (enters as -d).
        d: f64,
    },
}

/// Build one of the benchmark chains.
pub fn build_model(model: Model, n_qubits: usize) -> Result<Hamiltonian> {
    match model {
        Model::Heisenberg { jx, jy, jz } => Hamiltonian::heisenberg_chain(n_qubits, jx, jy, jz),
        Model::Tfim { j, d } => Hamiltonian::tfim_chain(n_qubits, j, d),
    }
}

/// Closed-form gap of the open transverse-field Ising chain between the
/// ground and first excited state:
/// `ΔE = 2 sqrt(J² + d² - 2 J d cos(π/(N+1)))`.
pub fn tfim_gap(n_qubits: usize, j: f64, d: f64) -> f64 {
    let c = math::cos(math::PI / (n_qubits as f64 + 1.0));
    2.0 * math::sqrt(j * j + d * d - 2.0 * j * d * c)
}
