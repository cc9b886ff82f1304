//! Classical post-processing: observable time series → filtered data
//! matrix → dominant signals → spectral function → gap peaks.
//!
//! The stages follow the shadow-spectroscopy recipe:
//!
//! 1. Estimate every observable at every time point from the snapshots
//!    (one pass over records; each record touches only the observables
//!    whose support letters match its measured bases).
//! 2. Standardize each series to mean 0 / population σ 1, dropping
//!    constant rows, and keep the most significant fraction under the
//!    Ljung-Box white-noise test.
//! 3. Eigendecompose the N_t × N_t Gram matrix DᵀD and take the top `c`
//!    eigenvectors as dominant time signals. (The correlation matrix is
//!    time-indexed here so the eigenvectors are length-N_t series; the
//!    N_o × N_o form carries the same nonzero spectrum.)
//! 4. Cross-correlate the dominant signals over time lags, zero-pad,
//!    DFT, and take the largest singular value λ(ω) of the c × c matrix
//!    per frequency bin.
//! 5. Peaks of λ(ω) away from DC sit at the Hamiltonian's energy gaps.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::math;
use crate::observables::ObservableSet;
use crate::pauli::{Pauli, PauliString};
use crate::shadows::SnapshotSet;
use crate::statevector::Basis;
use crate::stats;
use crate::{Error, Result, C64};

/// Raw estimated time series, one row per observable.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSignalMatrix {
    /// Number of observables (rows).
    pub n_series: usize,
    /// Number of time points (columns).
    pub n_t: usize,
    /// Row-major values.
    pub values: Vec<f64>,
}

impl RawSignalMatrix {
    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_t..(i + 1) * self.n_t]
    }
}

/// Standardized, filtered signal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    /// Original observable index of each kept row.
    pub rows: Vec<usize>,
    /// Number of time points.
    pub n_t: usize,
    /// Row-major standardized values.
    pub values: Vec<f64>,
    /// Always true for the output of the filter stage.
    pub standardized: bool,
}

impl DataMatrix {
    /// Number of kept rows.
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Kept row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_t..(i + 1) * self.n_t]
    }
}

/// Dominant time signals: top Gram-matrix eigenpairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantSignals {
    /// Descending eigenvalues of DᵀD for the kept signals.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm length-N_t signals, sign-fixed so the
    /// largest-magnitude entry is positive.
    pub vectors: Vec<Vec<f64>>,
}

/// One spectral peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Angular frequency (energy, ħ = 1), parabolic-refined.
    pub omega: f64,
    /// Peak height λ.
    pub lambda: f64,
}

/// The spectral function on its frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending angular frequencies from 0 to π/dt.
    pub omegas: Vec<f64>,
    /// λ(ω) per bin, nonnegative.
    pub lambdas: Vec<f64>,
    /// Detected peaks, descending by height.
    pub peaks: Vec<Peak>,
}

impl Spectrum {
    /// Bin spacing `2π/(L_pad·dt)`.
    pub fn bin_width(&self) -> f64 {
        if self.omegas.len() > 1 {
            self.omegas[1] - self.omegas[0]
        } else {
            0.0
        }
    }

    /// λ at the bin nearest `omega`.
    pub fn lambda_near(&self, omega: f64) -> f64 {
        let bw = self.bin_width();
        if bw == 0.0 {
            return self.lambdas[0];
        }
        let idx = (math::round(omega / bw) as usize).min(self.lambdas.len() - 1);
        self.lambdas[idx]
    }
}

/// Tunables of the classical pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectroscopyConfig {
    /// Fraction of (non-degenerate) rows kept after the Ljung-Box
    /// ranking.
    pub keep_fraction: f64,
    /// Ljung-Box lag count; `None` = `min(10, N_t/5)`.
    pub lb_lags: Option<usize>,
    /// Number of dominant signals.
    pub c: usize,
    /// Zero-padding multiple for the lag DFT.
    pub zero_pad: usize,
    /// Bins excluded around DC in peak search.
    pub dc_exclude_bins: usize,
    /// Prominence threshold as a fraction of the spectrum maximum.
    pub min_prominence_fraction: f64,
}

impl Default for SpectroscopyConfig {
    fn default() -> Self {
        Self {
            keep_fraction: 0.10,
            lb_lags: None,
            c: 5,
            zero_pad: 4,
            dc_exclude_bins: 2,
            min_prominence_fraction: 0.2,
        }
    }
}

fn basis_letter(b: Basis) -> Pauli {
    match b {
        Basis::X => Pauli::X,
        Basis::Y => Pauli::Y,
        Basis::Z => Pauli::Z,
    }
}

/// Estimate `Ŝ_i(n)` for every observable and time point.
///
/// Single pass over records: a record contributes only to observables
/// supported on site subsets where the observable letters equal the
/// measured bases, so each record updates `Σ_w C(N,w)` rows with its
/// `Γ·(±3)^w` values.
pub fn build_time_series(set: &SnapshotSet, obs: &ObservableSet) -> Result<RawSignalMatrix> {
    let meta = set.meta();
    assert_eq!(
        obs.n_qubits(),
        meta.n_qubits,
        "observable set width mismatch"
    );
    let n_t = meta.n_t;
    let n_series = obs.len();
    let mut sums = vec![0.0f64; n_series * n_t];
    let q = obs.locality();
    let n = meta.n_qubits;

    for record in set.records() {
        let col = record.time_index - 1;
        // Depth-first over site subsets of size 1..=q, carrying the
        // running ±3^w factor and the letter string forced by the bases.
        subset_walk(
            0,
            n,
            q,
            record.gamma,
            PauliString::identity(n),
            record,
            obs,
            col,
            n_t,
            &mut sums,
            1,
        );
    }

    let per_point = meta.m_samples * meta.shots_per_sample;
    for v in &mut sums {
        *v /= per_point as f64;
    }
    Ok(RawSignalMatrix {
        n_series,
        n_t,
        values: sums,
    })
}

#[allow(clippy::too_many_arguments)]
fn subset_walk(
    start: usize,
    n: usize,
    q: usize,
    value: f64,
    string: PauliString,
    record: &crate::shadows::SnapshotRecord,
    obs: &ObservableSet,
    col: usize,
    n_t: usize,
    sums: &mut [f64],
    depth: usize,
) {
    for site in start..n {
        let mut s = string;
        s.set(site, basis_letter(record.bases[site]));
        let v = value * if record.bit(site) { -3.0 } else { 3.0 };
        if let Some(row) = obs.index_of(&s) {
            sums[row * n_t + col] += v;
        }
        if depth < q {
            subset_walk(site + 1, n, q, v, s, record, obs, col, n_t, sums, depth + 1);
        }
    }
}

/// Variance floor below which a row counts as constant.
const SIGMA_FLOOR: f64 = 1e-12;

/// Standardize rows and keep the `keep_fraction` most significant under
/// the Ljung-Box test (ascending p-value, ties broken by descending Q,
/// then row index).
pub fn standardize_and_filter(
    raw: &RawSignalMatrix,
    keep_fraction: f64,
    lb_lags: Option<usize>,
) -> Result<DataMatrix> {
    if raw.n_t < 8 {
        return Err(Error::InvalidPlan(alloc::format!(
            "spectroscopy needs at least 8 time points, got {}",
            raw.n_t
        )));
    }
    assert!(
        (0.0..=1.0).contains(&keep_fraction),
        "keep_fraction outside [0, 1]"
    );
    let n_t = raw.n_t;
    let lags = lb_lags
        .unwrap_or_else(|| stats::default_lb_lags(n_t))
        .clamp(1, n_t - 1);

    struct Candidate {
        row: usize,
        standardized: Vec<f64>,
        p: f64,
        q: f64,
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    for i in 0..raw.n_series {
        let row = raw.row(i);
        let mean = row.iter().sum::<f64>() / n_t as f64;
        let var = row.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n_t as f64;
        let sigma = math::sqrt(var);
        if sigma < SIGMA_FLOOR {
            continue;
        }
        let standardized: Vec<f64> = row.iter().map(|x| (x - mean) / sigma).collect();
        let lb = stats::ljung_box(&standardized, lags);
        candidates.push(Candidate {
            row: i,
            standardized,
            p: lb.p_value,
            q: lb.statistic,
        });
    }
    if candidates.is_empty() {
        return Err(Error::DegenerateSignals);
    }
    candidates.sort_by(|a, b| {
        a.p.partial_cmp(&b.p)
            .unwrap()
            .then(b.q.partial_cmp(&a.q).unwrap())
            .then(a.row.cmp(&b.row))
    });
    let keep =
        (math::ceil(keep_fraction * candidates.len() as f64) as usize).clamp(1, candidates.len());
    candidates.truncate(keep);
    // Matrix rows in original observable order.
    candidates.sort_by_key(|c| c.row);

    let mut values = Vec::with_capacity(keep * n_t);
    let mut rows = Vec::with_capacity(keep);
    for c in candidates {
        rows.push(c.row);
        values.extend_from_slice(&c.standardized);
    }
    Ok(DataMatrix {
        rows,
        n_t,
        values,
        standardized: true,
    })
}

/// Top `c` eigenpairs of the time-correlation Gram matrix `DᵀD`.
pub fn dominant_time_signals(d: &DataMatrix, c: usize) -> Result<DominantSignals> {
    let n_t = d.n_t;
    if c < 1 || c > n_t {
        return Err(Error::TooManySignals { c, n_t });
    }
    let mut gram = vec![0.0f64; n_t * n_t];
    for r in 0..d.n_rows() {
        let row = d.row(r);
        for a in 0..n_t {
            let ra = row[a];
            if ra == 0.0 {
                continue;
            }
            for b in a..n_t {
                gram[a * n_t + b] += ra * row[b];
            }
        }
    }
    for a in 0..n_t {
        for b in 0..a {
            gram[a * n_t + b] = gram[b * n_t + a];
        }
    }
    let eig = linalg::symmetric_eigen(gram, n_t);
    let mut eigenvalues = Vec::with_capacity(c);
    let mut vectors = Vec::with_capacity(c);
    for k in 0..c {
        let src = n_t - 1 - k; // descending
        eigenvalues.push(eig.eigenvalues[src]);
        let mut v: Vec<f64> = eig.eigenvectors[src * n_t..(src + 1) * n_t].to_vec();
        // Deterministic sign: largest-magnitude entry positive.
        let mut max_idx = 0;
        for (i, x) in v.iter().enumerate() {
            if math::abs(*x) > math::abs(v[max_idx]) {
                max_idx = i;
            }
        }
        if v[max_idx] < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
        vectors.push(v);
    }
    Ok(DominantSignals {
        eigenvalues,
        vectors,
    })
}

/// Lag cross-correlations of the dominant signals, zero-padded DFT, and
/// the per-bin largest singular value.
pub fn spectral_function(signals: &[Vec<f64>], dt: f64, zero_pad: usize) -> Spectrum {
    assert!(!signals.is_empty(), "need at least one dominant signal");
    assert!(dt > 0.0, "dt must be positive");
    let zero_pad = zero_pad.max(1);
    let c = signals.len();
    let n_t = signals[0].len();
    for v in signals {
        assert_eq!(v.len(), n_t, "signal length mismatch");
    }
    // x_{kl}(m) = Σ_{n} v_k(n+m) v_l(n), m = 0 .. N_t-2.
    let n_lags = n_t.saturating_sub(1);
    let mut lag = vec![0.0f64; c * c * n_lags];
    for k in 0..c {
        for l in 0..c {
            for m in 0..n_lags {
                let mut acc = 0.0;
                for n in 0..n_t.saturating_sub(m + 1) {
                    acc += signals[k][n + m] * signals[l][n];
                }
                lag[(k * c + l) * n_lags + m] = acc;
            }
        }
    }
    let l_pad = zero_pad * n_t;
    let n_bins = l_pad / 2 + 1;
    let mut omegas = Vec::with_capacity(n_bins);
    let mut lambdas = Vec::with_capacity(n_bins);
    let mut twiddle = vec![C64::new(0.0, 0.0); n_lags];
    let mut xf = vec![C64::new(0.0, 0.0); c * c];
    for f in 0..n_bins {
        let w = -2.0 * math::PI * f as f64 / l_pad as f64;
        for (m, t) in twiddle.iter_mut().enumerate() {
            let a = w * m as f64;
            *t = C64::new(math::cos(a), math::sin(a));
        }
        for k in 0..c {
            for l in 0..c {
                let series = &lag[(k * c + l) * n_lags..(k * c + l + 1) * n_lags];
                let mut acc = C64::new(0.0, 0.0);
                for (x, t) in series.iter().zip(&twiddle) {
                    acc += t * *x;
                }
                xf[k * c + l] = acc;
            }
        }
        omegas.push(2.0 * math::PI * f as f64 / (l_pad as f64 * dt));
        lambdas.push(linalg::largest_singular_value(&xf, c, c));
    }
    Spectrum {
        omegas,
        lambdas,
        peaks: Vec::new(),
    }
}

/// Local maxima of λ beyond the DC exclusion zone with topographic
/// prominence at least `min_prominence_fraction` of the maximum λ in
/// the searched range, sorted by descending height. Peak frequencies
/// are refined by three-point parabolic interpolation.
pub fn find_gap_peaks(
    spectrum: &Spectrum,
    dc_exclude_bins: usize,
    min_prominence_fraction: f64,
) -> Result<Vec<Peak>> {
    let lam = &spectrum.lambdas;
    let n = lam.len();
    if dc_exclude_bins + 1 >= n {
        return Err(Error::InvalidPlan(alloc::format!(
            "dc_exclude_bins={dc_exclude_bins} leaves no bins out of {n}"
        )));
    }
    let search_max = lam[dc_exclude_bins + 1..]
        .iter()
        .fold(0.0f64, |a, &b| a.max(b));
    if search_max <= 0.0 {
        return Ok(Vec::new());
    }
    let threshold = min_prominence_fraction * search_max;
    let mut peaks = Vec::new();
    for i in dc_exclude_bins + 1..n - 1 {
        if !(lam[i] > lam[i - 1] && lam[i] >= lam[i + 1]) {
            continue;
        }
        // Topographic prominence: drop to the key saddle on each side,
        // walking until a higher bin or the spectrum edge.
        let mut left_min = lam[i];
        for j in (0..i).rev() {
            if lam[j] > lam[i] {
                break;
            }
            left_min = left_min.min(lam[j]);
        }
        let mut right_min = lam[i];
        for &value in lam.iter().skip(i + 1) {
            if value > lam[i] {
                break;
            }
            right_min = right_min.min(value);
        }
        let prominence = lam[i] - left_min.max(right_min);
        if prominence < threshold {
            continue;
        }
        let bw = spectrum.bin_width();
        let denom = lam[i - 1] - 2.0 * lam[i] + lam[i + 1];
        let offset = if denom < 0.0 {
            0.5 * (lam[i - 1] - lam[i + 1]) / denom
        } else {
            0.0
        };
        peaks.push(Peak {
            omega: spectrum.omegas[i] + offset * bw,
            lambda: lam[i],
        });
    }
    peaks.sort_by(|a, b| b.lambda.partial_cmp(&a.lambda).unwrap());
    Ok(peaks)
}

/// Run the whole classical pipeline on a snapshot set.
pub fn analyze(
    set: &SnapshotSet,
    obs: &ObservableSet,
    cfg: &SpectroscopyConfig,
) -> Result<Spectrum> {
    let raw = build_time_series(set, obs)?;
    let d = standardize_and_filter(&raw, cfg.keep_fraction, cfg.lb_lags)?;
    let dominant = dominant_time_signals(&d, cfg.c)?;
    let mut spectrum = spectral_function(&dominant.vectors, set.meta().dt, cfg.zero_pad);
    spectrum.peaks = find_gap_peaks(&spectrum, cfg.dc_exclude_bins, cfg.min_prominence_fraction)?;
    Ok(spectrum)
}
