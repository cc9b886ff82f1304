//! Pauli strings over up to 64 qubits.
//!
//! A string is stored as a pair of bitmasks in the symplectic
//! convention: bit `k` of `x_mask` is set when site `k` carries X or Y,
//! bit `k` of `z_mask` when it carries Z or Y. Commutation of two
//! strings is then a parity of mask intersections — O(1) instead of a
//! per-site scan.
//!
//! Site 0 is the leftmost letter in the text form, so `"XZ"` is X on
//! qubit 0 and Z on qubit 1.

use core::fmt;
use core::str::FromStr;

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Maximum width representable by the bitmask pair.
pub const MAX_QUBITS: usize = 64;

/// Single-site Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    /// Identity.
    I,
    /// Pauli-X.
    X,
    /// Pauli-Y.
    Y,
    /// Pauli-Z.
    Z,
}

impl Pauli {
    /// Letter form.
    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A tensor product of single-site Paulis on a fixed number of qubits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
}

impl PauliString {
    /// The identity string on `n_qubits` sites.
    pub fn identity(n_qubits: usize) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n_qubits),
            "unsupported width {n_qubits}"
        );
        Self {
            n_qubits,
            x_mask: 0,
            z_mask: 0,
        }
    }

    /// Build from explicit per-site letters.
    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut s = Self::identity(letters.len());
        for (k, &p) in letters.iter().enumerate() {
            s.set(k, p);
        }
        s
    }

    /// Build from raw symplectic masks.
    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64) -> Self {
        let mut s = Self::identity(n_qubits);
        let width_mask = Self::width_mask(n_qubits);
        assert!(
            x_mask & !width_mask == 0 && z_mask & !width_mask == 0,
            "mask bits outside the {n_qubits}-qubit register"
        );
        s.x_mask = x_mask;
        s.z_mask = z_mask;
        s
    }

    /// A single non-identity letter at `site`, identity elsewhere.
    pub fn single(n_qubits: usize, site: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n_qubits);
        s.set(site, p);
        s
    }

    fn width_mask(n_qubits: usize) -> u64 {
        if n_qubits == MAX_QUBITS {
            u64::MAX
        } else {
            (1u64 << n_qubits) - 1
        }
    }

    /// Overwrite the letter at `site`.
    pub fn set(&mut self, site: usize, p: Pauli) {
        assert!(
            site < self.n_qubits,
            "site {site} out of range for {} qubits",
            self.n_qubits
        );
        let bit = 1u64 << site;
        let (x, z) = match p {
            Pauli::I => (0, 0),
            Pauli::X => (bit, 0),
            Pauli::Y => (bit, bit),
            Pauli::Z => (0, bit),
        };
        self.x_mask = (self.x_mask & !bit) | x;
        self.z_mask = (self.z_mask & !bit) | z;
    }

    /// The letter at `site`.
    pub fn letter(&self, site: usize) -> Pauli {
        assert!(site < self.n_qubits);
        let bit = 1u64 << site;
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Register width.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Sites carrying X or Y.
    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    /// Sites carrying Z or Y.
    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    /// Number of Y letters.
    pub fn y_count(&self) -> usize {
        (self.x_mask & self.z_mask).count_ones() as usize
    }

    /// True when every site is the identity.
    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Indices of the non-identity sites, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut m = self.x_mask | self.z_mask;
        let mut out = Vec::with_capacity(m.count_ones() as usize);
        while m != 0 {
            out.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        out
    }

    /// Symplectic commutation test: two strings anticommute exactly when
    /// they disagree (X-vs-Z overlap) on an odd number of sites.
    pub fn commutes_with(&self, other: &Self) -> bool {
        assert_eq!(self.n_qubits, other.n_qubits, "width mismatch");
        let overlap =
            (self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones();
        overlap % 2 == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n_qubits {
            write!(f, "{}", self.letter(k).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString(\"{self}\")")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidPauliString(s.to_string()));
        }
        let mut out = Self::identity(n);
        for (k, c) in s.chars().enumerate() {
            let p =
                Pauli::from_letter(c).ok_or_else(|| Error::InvalidPauliString(s.to_string()))?;
            out.set(k, p);
        }
        Ok(out)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for PauliString {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> core::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> core::result::Result<Self, D::Error> {
        let s = <alloc::string::String as serde::Deserialize>::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
