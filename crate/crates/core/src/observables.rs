//! Enumeration of local Pauli observable sets.
//!
//! The spectroscopy stage tracks every Pauli observable of weight
//! 1..=q. Two layouts are supported: `AllSubsets` places the letters on
//! arbitrary site subsets (count `Σ_w C(N,w)·3^w`), `ContiguousWindows`
//! restricts supports to length-q windows of the chain.
//!
//! The enumeration order is canonical (weight, then lexicographic site
//! subset, then base-3 letter code), which lets `AllSubsets` map a
//! string to its row index arithmetically — the estimation pass relies
//! on that to bucket snapshot contributions without a hash lookup.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::pauli::{Pauli, PauliString};
use crate::{Error, Result};

/// Geometry of the observable supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableMode {
    /// Weight-w letters on any w-site subset, w = 1..=q.
    AllSubsets,
    /// All non-identity strings supported inside each length-q window.
    ContiguousWindows,
}

/// An enumerated set of local Pauli observables.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    n_qubits: usize,
    locality: usize,
    mode: ObservableMode,
    observables: Vec<PauliString>,
    /// Row lookup for `ContiguousWindows`; `AllSubsets` uses arithmetic.
    index: Option<BTreeMap<PauliString, usize>>,
    /// `offsets[w]` = first row of weight-w strings (`AllSubsets`).
    offsets: Vec<usize>,
}

const LETTERS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Lexicographic rank of an ascending `w`-subset of `0..n`.
fn subset_rank(n: usize, sites: &[usize]) -> usize {
    let w = sites.len();
    let mut rank = 0;
    let mut prev: isize = -1;
    for (i, &s) in sites.iter().enumerate() {
        for j in (prev + 1) as usize..s {
            rank += binomial(n - 1 - j, w - 1 - i);
        }
        prev = s as isize;
    }
    rank
}

impl ObservableSet {
    /// Enumerate every observable of weight `1..=q` in canonical order.
    pub fn enumerate(n_qubits: usize, q: usize, mode: ObservableMode) -> Result<Self> {
        if q < 1 || q > n_qubits {
            return Err(Error::InvalidLocality { q, n_qubits });
        }
        match mode {
            ObservableMode::AllSubsets => Ok(Self::enumerate_all_subsets(n_qubits, q)),
            ObservableMode::ContiguousWindows => Ok(Self::enumerate_windows(n_qubits, q)),
        }
    }

    fn enumerate_all_subsets(n: usize, q: usize) -> Self {
        let mut observables = Vec::new();
        let mut offsets = Vec::with_capacity(q + 2);
        offsets.push(0); // weight 0 placeholder
        for w in 1..=q {
            offsets.push(observables.len());
            let mut sites: Vec<usize> = (0..w).collect();
            loop {
                for code in 0..3usize.pow(w as u32) {
                    observables.push(Self::string_for(n, &sites, code));
                }
                if !next_combination(&mut sites, n) {
                    break;
                }
            }
        }
        offsets.push(observables.len());
        Self {
            n_qubits: n,
            locality: q,
            mode: ObservableMode::AllSubsets,
            observables,
            index: None,
            offsets,
        }
    }

    fn enumerate_windows(n: usize, q: usize) -> Self {
        let mut observables = Vec::new();
        let mut index = BTreeMap::new();
        for start in 0..=(n - q) {
            // Base-4 letter pattern over the window, skipping all-identity.
            for code in 1..4usize.pow(q as u32) {
                let mut s = PauliString::identity(n);
                let mut c = code;
                for k in 0..q {
                    let digit = c % 4;
                    c /= 4;
                    if digit > 0 {
                        s.set(start + k, LETTERS[digit - 1]);
                    }
                }
                if let alloc::collections::btree_map::Entry::Vacant(e) = index.entry(s) {
                    e.insert(observables.len());
                    observables.push(s);
                }
            }
        }
        Self {
            n_qubits: n,
            locality: q,
            mode: ObservableMode::ContiguousWindows,
            observables,
            index: Some(index),
            offsets: Vec::new(),
        }
    }

    fn string_for(n: usize, sites: &[usize], code: usize) -> PauliString {
        let w = sites.len();
        let mut s = PauliString::identity(n);
        let mut c = code;
        for i in (0..w).rev() {
            s.set(sites[i], LETTERS[c % 3]);
            c /= 3;
        }
        s
    }

    /// Register width.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Maximum weight `q`.
    pub fn locality(&self) -> usize {
        self.locality
    }

    /// Support geometry.
    pub fn mode(&self) -> ObservableMode {
        self.mode
    }

    /// The observables in enumeration order.
    pub fn observables(&self) -> &[PauliString] {
        &self.observables
    }

    /// Number of observables.
    pub fn len(&self) -> usize {
        self.observables.len()
    }

    /// True when the set is empty (never for a valid enumeration).
    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    /// Row index of `p` in enumeration order, if present.
    pub fn index_of(&self, p: &PauliString) -> Option<usize> {
        if p.n_qubits() != self.n_qubits {
            return None;
        }
        let w = p.weight();
        if w == 0 || w > self.locality {
            return None;
        }
        match &self.index {
            Some(map) => map.get(p).copied(),
            None => {
                let sites = p.support();
                let mut code = 0;
                for &s in &sites {
                    let digit = match p.letter(s) {
                        Pauli::X => 0,
                        Pauli::Y => 1,
                        Pauli::Z => 2,
                        Pauli::I => unreachable!(),
                    };
                    code = code * 3 + digit;
                }
                Some(
                    self.offsets[w]
                        + subset_rank(self.n_qubits, &sites) * 3usize.pow(w as u32)
                        + code,
                )
            }
        }
    }
}

/// Advance `sites` to the next lexicographic combination of `0..n`.
fn next_combination(sites: &mut [usize], n: usize) -> bool {
    let w = sites.len();
    let mut i = w;
    while i > 0 {
        i -= 1;
        if sites[i] < n - (w - i) {
            sites[i] += 1;
            for j in i + 1..w {
                sites[j] = sites[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    fn expected_count(n: usize, q: usize) -> usize {
        (1..=q).map(|w| binomial(n, w) * 3usize.pow(w as u32)).sum()
    }

    #[test]
    fn all_subsets_counts() {
        let set = ObservableSet::enumerate(10, 3, ObservableMode::AllSubsets).unwrap();
        assert_eq!(set.len(), 3675);
        assert_eq!(set.len(), expected_count(10, 3));

        let set = ObservableSet::enumerate(20, 3, ObservableMode::AllSubsets).unwrap();
        assert_eq!(set.len(), 32550);

        let set = ObservableSet::enumerate(1, 1, ObservableMode::AllSubsets).unwrap();
        let letters: Vec<_> = set.observables().iter().map(|p| p.to_string()).collect();
        assert_eq!(letters.len(), 3);
        for l in ["X", "Y", "Z"] {
            assert!(letters.iter().any(|s| s == l));
        }
    }

    #[test]
    fn no_duplicates_and_weights_in_range() {
        for (n, q, mode) in [
            (6, 3, ObservableMode::AllSubsets),
            (6, 3, ObservableMode::ContiguousWindows),
            (5, 2, ObservableMode::ContiguousWindows),
            (4, 4, ObservableMode::AllSubsets),
        ] {
            let set = ObservableSet::enumerate(n, q, mode).unwrap();
            let unique: BTreeSet<_> = set.observables().iter().copied().collect();
            assert_eq!(unique.len(), set.len(), "duplicates in {mode:?}");
            for p in set.observables() {
                assert!(p.weight() >= 1 && p.weight() <= q);
            }
        }
    }

    #[test]
    fn index_of_inverts_enumeration() {
        for mode in [
            ObservableMode::AllSubsets,
            ObservableMode::ContiguousWindows,
        ] {
            let set = ObservableSet::enumerate(6, 3, mode).unwrap();
            for (i, p) in set.observables().iter().enumerate() {
                assert_eq!(set.index_of(p), Some(i), "{p} in {mode:?}");
            }
        }
    }

    #[test]
    fn index_of_rejects_foreign_strings() {
        let set = ObservableSet::enumerate(6, 2, ObservableMode::AllSubsets).unwrap();
        let heavy: PauliString = "XXXIII".parse().unwrap();
        assert_eq!(set.index_of(&heavy), None);
        assert_eq!(set.index_of(&PauliString::identity(6)), None);
        let wrong_width: PauliString = "XX".parse().unwrap();
        assert_eq!(set.index_of(&wrong_width), None);
    }

    #[test]
    fn locality_bounds_checked() {
        assert!(ObservableSet::enumerate(4, 0, ObservableMode::AllSubsets).is_err());
        assert!(ObservableSet::enumerate(4, 5, ObservableMode::AllSubsets).is_err());
    }

    #[test]
    fn contiguous_is_subset_of_all_subsets() {
        let windows = ObservableSet::enumerate(6, 3, ObservableMode::ContiguousWindows).unwrap();
        let all = ObservableSet::enumerate(6, 3, ObservableMode::AllSubsets).unwrap();
        assert!(windows.len() < all.len());
        for p in windows.observables() {
            assert!(all.index_of(p).is_some());
            // Support must fit a length-3 window.
            let s = p.support();
            assert!(s.last().unwrap() - s.first().unwrap() < 3);
        }
    }
}
