//! Acceptance suite: one test per criterion, each asserting its stated
//! tolerance and printing a PASS line (run with `--nocapture` to see
//! them). The two paper-scale reproductions are `#[ignore]`d slow tests;
//! see the README for how to run them.

use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gapscope::{dense, driver, report, validate};
use gapscope_core::eigen;
use gapscope_core::evolution::{
    self, expected_gate_count_asymptotic, overhead_asymptotic, PaiCoefficients, PaiSchedule,
    TimeGrid,
};
use gapscope_core::hamiltonian::{tfim_gap, Hamiltonian};
use gapscope_core::observables::{ObservableMode, ObservableSet};
use gapscope_core::pauli::{Pauli, PauliString};
use gapscope_core::shadows::{
    estimate_observable, variance_bound, ExperimentPlan, InitialState, Method, SamplingConfig,
    SnapshotRecord, SnapshotSet,
};
use gapscope_core::spectroscopy::{self, SpectroscopyConfig, Spectrum};
use gapscope_core::statevector::{NoiseModel, StateVector};

const PI: f64 = std::f64::consts::PI;

fn pass(criterion: &str, started: Instant, detail: &str) {
    println!("PASS {criterion}: {detail} [{:.2?}]", started.elapsed());
}

/// Criterion 1 — the three-branch decomposition reproduces the exact
/// rotation channel as a 4×4 superoperator at 1e-12, and the
/// coefficients sum to 1, over 200 random (θ, Δ) pairs.
#[test]
fn criterion_1_decomposition_identity() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce551);
    let mut max_gap: f64 = 0.0;
    let mut max_sum: f64 = 0.0;
    for _ in 0..200 {
        let delta = rng.random::<f64>() * (PI - 0.02) + 0.01;
        let theta = (rng.random::<f64>() * 2.0 - 1.0) * delta;
        let axis = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
        max_gap = max_gap.max(validate::decomposition_gap(axis, theta, delta, [0.0; 3]));
        let c = PaiCoefficients::new(theta, delta).unwrap();
        max_sum = max_sum.max((c.a1 + c.a2 + c.a3 - 1.0).abs());
    }
    assert!(max_gap < 1e-12, "superoperator gap {max_gap:.3e}");
    assert!(max_sum < 1e-12, "coefficient sum error {max_sum:.3e}");
    assert!(t0.elapsed().as_secs_f64() < 1.0, "criterion 1 over budget");
    pass(
        "criterion 1 (decomposition identity)",
        t0,
        &format!("max superop gap {max_gap:.2e}, max |Σa-1| {max_sum:.2e} over 200 draws"),
    );
}

/// The 2-qubit instance shared by criteria 2 and 3:
/// H = XX + Z on qubit 1, t = 0.7, K = 4, Δ = π/4, O = Z_0, |00> input.
fn toy_plan(m: usize, n_s: usize, seed: u64) -> ExperimentPlan {
    let (h, _, t, k, delta) = validate::toy_instance();
    ExperimentPlan::new(
        h,
        StateVector::zero(2),
        false,
        TimeGrid::new(t, 1, k).unwrap(),
        SamplingConfig {
            method: Method::Tepai,
            delta,
            m_samples: m,
            shots_per_sample: n_s,
            noise: None,
            noise_on_measurement: true,
            seed,
        },
    )
    .unwrap()
}

/// Per-circuit means Y_m and the standard error of their average.
fn estimator_with_se(records: &[SnapshotRecord], o: &PauliString, n_s: usize) -> (f64, f64) {
    let y: Vec<f64> = records
        .chunks(n_s)
        .map(|chunk| {
            chunk
                .iter()
                .map(|r| r.gamma * gapscope_core::shadows::snapshot_estimate(r, o))
                .sum::<f64>()
                / n_s as f64
        })
        .collect();
    let m = y.len() as f64;
    let mean = y.iter().sum::<f64>() / m;
    let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Criterion 2 — the TE-PAI + shadow estimator matches the dense-channel
/// Trotter expectation within 5 standard errors at every (M, N_s) split
/// of 10^5 total records.
#[test]
fn criterion_2_estimator_unbiasedness() {
    let t0 = Instant::now();
    let (h, z0, t, k, _) = validate::toy_instance();
    let exact = dense::trotter_expectation_from_zero(&h, t, k, &z0);
    let mut details = String::new();
    for (m, n_s) in [(100_000usize, 1usize), (50_000, 2), (25_000, 4)] {
        let plan = toy_plan(m, n_s, 21);
        let out = driver::run_experiment(&plan).unwrap();
        let records = out.set.records_at(1);
        let (est, se) = estimator_with_se(records, &z0, n_s);
        let dev = (est - exact).abs();
        assert!(
            dev <= 5.0 * se,
            "(M={m}, Ns={n_s}): estimate {est:.5} vs exact {exact:.5}, |Δ| = {dev:.2e} > 5·SE = {:.2e}",
            5.0 * se
        );
        details.push_str(&format!(" (M={m},Ns={n_s}): |Δ|/SE = {:.2};", dev / se));
    }
    assert!(t0.elapsed().as_secs_f64() < 60.0, "criterion 2 over budget");
    pass(
        "criterion 2 (estimator unbiasedness)",
        t0,
        &format!("dense Trotter <Z0> = {exact:.5};{details}"),
    );
}

/// Criterion 3 — empirical Var[<Ô>] over 200 repetitions stays under the
/// Γ²((3^q-1)/(M·N_s) + 1/M) bound at q = 1 for all three splits; the
/// population-level inequality is also checked exactly by branch
/// enumeration.
#[test]
fn criterion_3_variance_bound() {
    let t0 = Instant::now();
    let (h, z0, t, k, delta) = validate::toy_instance();
    let gamma = evolution::gamma_exact(&h, t, k, delta).unwrap();
    let gamma_sq = gamma * gamma;

    // Exact population variance pieces by exhaustive branch enumeration.
    let circuit = evolution::trotter_circuit(&h, t, k).unwrap();
    let gates: Vec<(PauliString, f64)> =
        circuit.gates().iter().map(|g| (g.axis, g.angle)).collect();
    let mut mu = 0.0;
    let mut e_w2 = 0.0;
    for assignment in 0..3usize.pow(gates.len() as u32) {
        let mut prob = 1.0;
        let mut sign = 1.0;
        let mut psi = vec![gapscope_core::C64::new(0.0, 0.0); 4];
        psi[0] = gapscope_core::C64::new(1.0, 0.0);
        let mut code = assignment;
        for (axis, angle) in &gates {
            let d = code % 3;
            code /= 3;
            let c = PaiCoefficients::new(*angle, delta).unwrap();
            let p = c.probabilities();
            let (a, pd, ga) = match d {
                0 => (c.a1, p[0], None),
                1 => (c.a2, p[1], Some(if *angle < 0.0 { -delta } else { delta })),
                _ => (c.a3, p[2], Some(PI)),
            };
            prob *= pd;
            sign *= if a < 0.0 { -1.0 } else { 1.0 };
            if prob == 0.0 {
                break;
            }
            if let Some(ga) = ga {
                psi = dense::matvec(&dense::rotation_matrix(axis, ga), &psi);
            }
        }
        if prob == 0.0 {
            continue;
        }
        let w = dense::expectation(&dense::pauli_matrix(&z0), &psi);
        mu += prob * sign * gamma * w;
        e_w2 += prob * w * w;
    }

    let mut details = format!("Γ² = {gamma_sq:.4};");
    for (m, n_s) in [(100_000usize, 1usize), (50_000, 2), (25_000, 4)] {
        let bound = variance_bound(gamma_sq, 1, m, n_s);
        // Population variance of the estimator (shadow second moment of
        // a weight-1 Pauli is exactly 3).
        let ns = n_s as f64;
        let exact_var =
            (3.0 * gamma_sq / ns + (1.0 - 1.0 / ns) * gamma_sq * e_w2 - mu * mu) / m as f64;
        assert!(
            exact_var <= bound,
            "(M={m}, Ns={n_s}): population variance {exact_var:.3e} exceeds bound {bound:.3e}"
        );

        let reps = 200;
        let mut estimates = Vec::with_capacity(reps);
        for rep in 0..reps {
            let plan = toy_plan(m, n_s, 10_000 + rep as u64);
            let out = plan.run().unwrap();
            estimates.push(estimate_observable(out.set.records_at(1), &z0).unwrap());
        }
        let mean = estimates.iter().sum::<f64>() / reps as f64;
        let var = estimates
            .iter()
            .map(|e| (e - mean) * (e - mean))
            .sum::<f64>()
            / (reps - 1) as f64;
        assert!(
            var <= bound,
            "(M={m}, Ns={n_s}): empirical variance {var:.3e} exceeds bound {bound:.3e}"
        );
        details.push_str(&format!(
            " (M={m},Ns={n_s}): emp/bound = {:.3}, exact/bound = {:.3};",
            var / bound,
            exact_var / bound
        ));
    }
    assert!(
        t0.elapsed().as_secs_f64() < 120.0,
        "criterion 3 over budget"
    );
    pass("criterion 3 (variance bound)", t0, &details);
}

/// Criterion 4 — Monte-Carlo kept-gate count within 5σ of the
/// csc(Δ)(3-cosΔ)‖H‖₁t asymptotic, and the finite-K weight magnitude
/// within 2% of exp(2t‖H‖₁tan(Δ/2)), at ‖H‖₁ = t = 1, Δ = π/4, K = 10³.
#[test]
fn criterion_4_gate_count_and_overhead() {
    let t0 = Instant::now();
    let h = Hamiltonian::new(1, vec![(1.0, "Z".parse().unwrap())]);
    let k = 1000usize;
    let delta = PI / 4.0;
    let schedule = PaiSchedule::new(&h, 1.0 / k as f64, delta).unwrap();
    let samples = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let nu = schedule.sample(k, &mut rng).gate_count as f64;
        sum += nu;
        sum_sq += nu * nu;
    }
    let mean = sum / samples as f64;
    let sigma_mean = ((sum_sq / samples as f64 - mean * mean) / samples as f64).sqrt();
    let formula = expected_gate_count_asymptotic(1.0, 1.0, delta);
    let exact_mean = schedule.expected_gate_count(k);
    // The O(1/K) gap between the asymptotic formula and the exact mean
    // must itself be small before the 5σ Monte-Carlo check means much.
    assert!(
        (formula - exact_mean).abs() < 0.01,
        "asymptotic vs exact mean"
    );
    assert!(
        (mean - formula).abs() <= 5.0 * sigma_mean + (formula - exact_mean).abs(),
        "MC mean {mean:.4} vs formula {formula:.4} (5σ = {:.4})",
        5.0 * sigma_mean
    );

    let gamma = evolution::gamma_exact(&h, 1.0, k, delta).unwrap();
    let target = overhead_asymptotic(1.0, 1.0, delta);
    let rel = (gamma - target).abs() / target;
    assert!(
        rel < 0.02,
        "Γ = {gamma:.5} vs asymptotic {target:.5} ({:.2}%)",
        rel * 100.0
    );
    assert!(t0.elapsed().as_secs_f64() < 10.0, "criterion 4 over budget");
    pass(
        "criterion 4 (gate count and overhead)",
        t0,
        &format!(
            "MC mean {mean:.3} vs {formula:.3} (5σ = {:.3}); Γ gap {:.2}%",
            5.0 * sigma_mean,
            rel * 100.0
        ),
    );
}

/// Criterion 5 — the empirical Trotter error never exceeds
/// t²‖O‖‖c‖_T/K on the (t, K) grid for the 3-qubit Heisenberg chain.
#[test]
fn criterion_5_trotter_error_bound() {
    let t0 = Instant::now();
    let h = Hamiltonian::heisenberg_chain(3, 1.0, 1.0, 1.0).unwrap();
    let eig = eigen::eigendecompose(&h).unwrap();
    let psi0 = StateVector::product("100").unwrap();
    let z0: PauliString = "ZII".parse().unwrap();
    let mut worst: f64 = 0.0;
    for &t in &[0.5, 1.0, 2.0] {
        let exact = eigen::exact_expectation_series(&eig, &psi0, &z0, &[t])[0];
        for &k in &[4usize, 16, 64] {
            let circuit = evolution::trotter_circuit(&h, t, k).unwrap();
            let mut psi = psi0.clone();
            psi.apply_circuit(&circuit);
            let err = (psi.expectation_pauli(&z0) - exact).abs();
            let bound = evolution::trotter_error_bound(&h, 1.0, t, k);
            assert!(
                err <= bound,
                "t={t}, K={k}: error {err:.3e} > bound {bound:.3e}"
            );
            worst = worst.max(err / bound);
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 10.0, "criterion 5 over budget");
    pass(
        "criterion 5 (trotter error bound)",
        t0,
        &format!("empirical error within bound on all 9 grid cells; worst ratio {worst:.3}"),
    );
}

/// Criterion 6 — exact diagonalization of the 10-qubit Heisenberg chain
/// reproduces the reference energies to 4 decimal places and the gap to
/// 1e-4.
#[test]
fn criterion_6_heisenberg_reference_spectrum() {
    let t0 = Instant::now();
    let h = Hamiltonian::heisenberg_chain(10, 1.0, 1.0, 1.0).unwrap();
    let eig = eigen::eigendecompose(&h).unwrap();
    let e0 = eig.eigenvalues()[0];
    let e10 = eig.eigenvalues()[10];
    let gap = eig.gap(0, 10);
    assert!((e0 - (-17.0321)).abs() < 5e-5, "E0 = {e0:.6}");
    assert!((e10 - (-12.6726)).abs() < 5e-5, "E10 = {e10:.6}");
    assert!((gap - 4.3595).abs() <= 1e-4, "gap = {gap:.6}");
    pass(
        "criterion 6 (reference spectrum)",
        t0,
        &format!("E0 = {e0:.4}, E10 = {e10:.4}, gap = {gap:.4}"),
    );
}

/// Shared 6-qubit desk-scale run (criteria 7 and 8): level-15 gap,
/// N_t = 60, dt = 0.225, K = 300, Δ = π/2⁵, 1000 executions/point.
struct SixQubitRun {
    gap: f64,
    /// One unpadded frequency bin, 2π/(N_t·dt).
    bin: f64,
    trotter_spectrum: Spectrum,
    tepai_spectrum: Spectrum,
    tepai_set: SnapshotSet,
}

const SIX_Q_LEVEL: usize = 15;
const SIX_Q_T_TOTAL: f64 = 13.5;
const SIX_Q_N_T: usize = 60;
const SIX_Q_K: usize = 300;
const SIX_Q_SEED: u64 = 11;

fn heis6_plan(
    method: Method,
    t_total: f64,
    level: usize,
    m: usize,
    n_s: usize,
    noise: Option<NoiseModel>,
    seed: u64,
) -> ExperimentPlan {
    let h = Hamiltonian::heisenberg_chain(6, 1.0, 1.0, 1.0).unwrap();
    let (initial, degenerate) = InitialState::EigenSuperposition {
        levels: vec![0, level],
        weights: None,
    }
    .build(&h)
    .unwrap();
    ExperimentPlan::new(
        h,
        initial,
        degenerate,
        TimeGrid::new(t_total, SIX_Q_N_T, SIX_Q_K).unwrap(),
        SamplingConfig {
            method,
            delta: PI / 32.0,
            m_samples: m,
            shots_per_sample: n_s,
            noise,
            noise_on_measurement: true,
            seed,
        },
    )
    .unwrap()
}

fn observables6() -> &'static ObservableSet {
    static OBS: OnceLock<ObservableSet> = OnceLock::new();
    OBS.get_or_init(|| ObservableSet::enumerate(6, 3, ObservableMode::AllSubsets).unwrap())
}

fn six_qubit_run() -> &'static SixQubitRun {
    static RUN: OnceLock<SixQubitRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let h = Hamiltonian::heisenberg_chain(6, 1.0, 1.0, 1.0).unwrap();
        let eig = eigen::eigendecompose(&h).unwrap();
        let gap = eig.gap(0, SIX_Q_LEVEL);
        let bin = 2.0 * PI / SIX_Q_T_TOTAL;
        let cfg = SpectroscopyConfig::default();

        let trotter = heis6_plan(
            Method::Trotter,
            SIX_Q_T_TOTAL,
            SIX_Q_LEVEL,
            1,
            1000,
            None,
            SIX_Q_SEED,
        );
        let trotter_out = driver::run_experiment(&trotter).unwrap();
        let trotter_spectrum =
            spectroscopy::analyze(&trotter_out.set, observables6(), &cfg).unwrap();

        let tepai = heis6_plan(
            Method::Tepai,
            SIX_Q_T_TOTAL,
            SIX_Q_LEVEL,
            1000,
            1,
            None,
            SIX_Q_SEED,
        );
        let tepai_out = driver::run_experiment(&tepai).unwrap();
        let tepai_spectrum = spectroscopy::analyze(&tepai_out.set, observables6(), &cfg).unwrap();

        SixQubitRun {
            gap,
            bin,
            trotter_spectrum,
            tepai_spectrum,
            tepai_set: tepai_out.set,
        }
    })
}

/// Criterion 7 — desk-scale end-to-end gap recovery: the top spectral
/// peak sits within one unpadded bin of the diagonalization gap for
/// both evolution methods.
#[test]
fn criterion_7_end_to_end_gap_recovery() {
    let t0 = Instant::now();
    let run = six_qubit_run();
    let trotter_top = run.trotter_spectrum.peaks.first().expect("trotter peak");
    let tepai_top = run.tepai_spectrum.peaks.first().expect("tepai peak");
    assert!(
        (trotter_top.omega - run.gap).abs() <= run.bin,
        "trotter top peak {:.4} vs gap {:.4} (bin {:.4})",
        trotter_top.omega,
        run.gap,
        run.bin
    );
    assert!(
        (tepai_top.omega - run.gap).abs() <= run.bin,
        "tepai top peak {:.4} vs gap {:.4} (bin {:.4})",
        tepai_top.omega,
        run.gap,
        run.bin
    );
    assert!(
        t0.elapsed().as_secs_f64() < 900.0,
        "criterion 7 over budget"
    );
    pass(
        "criterion 7 (end-to-end gap recovery)",
        t0,
        &format!(
            "gap {:.4}; trotter peak {:.4} (λ {:.2}), tepai peak {:.4} (λ {:.2}), bin {:.4}",
            run.gap,
            trotter_top.omega,
            trotter_top.lambda,
            tepai_top.omega,
            tepai_top.lambda,
            run.bin
        ),
    );
}

/// Peak height: max λ within one unpadded bin of the gap.
fn peak_height_near(spectrum: &Spectrum, gap: f64, bin: f64) -> f64 {
    spectrum
        .omegas
        .iter()
        .zip(&spectrum.lambdas)
        .filter(|(w, _)| (**w - gap).abs() <= bin)
        .map(|(_, l)| *l)
        .fold(0.0, f64::max)
}

/// Cluster bootstrap over circuits: resample M circuit indices per time
/// point (keeping each circuit's N_s shots together) and re-run the
/// whole pipeline.
fn bootstrap_peak_sigma(set: &SnapshotSet, gap: f64, bin: f64, resamples: usize, seed: u64) -> f64 {
    let meta = set.meta().clone();
    let m = meta.m_samples;
    let n_s = meta.shots_per_sample;
    let cfg = SpectroscopyConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut heights = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let mut records = Vec::with_capacity(set.records().len());
        for s in 1..=meta.n_t {
            let block = set.records_at(s);
            for _ in 0..m {
                let pick = rng.random_range(0..m);
                records.extend_from_slice(&block[pick * n_s..(pick + 1) * n_s]);
            }
        }
        let resampled = SnapshotSet::from_records(meta.clone(), records).unwrap();
        let spectrum = spectroscopy::analyze(&resampled, observables6(), &cfg).unwrap();
        heights.push(peak_height_near(&spectrum, gap, bin));
    }
    let mean = heights.iter().sum::<f64>() / heights.len() as f64;
    let var =
        heights.iter().map(|h| (h - mean) * (h - mean)).sum::<f64>() / (heights.len() - 1) as f64;
    var.sqrt()
}

/// Criterion 8 — at a fixed total of 1000 executions the peak height is
/// invariant to the (M, N_s) split within 3× bootstrap deviations, and
/// the Trotter peak exceeds every TE-PAI peak.
#[test]
fn criterion_8_split_invariance() {
    let t0 = Instant::now();
    let run = six_qubit_run();
    let cfg = SpectroscopyConfig::default();

    let mut heights = vec![peak_height_near(&run.tepai_spectrum, run.gap, run.bin)];
    let mut sigmas = vec![bootstrap_peak_sigma(
        &run.tepai_set,
        run.gap,
        run.bin,
        30,
        81,
    )];
    for (m, n_s) in [(500usize, 2usize), (250, 4)] {
        let plan = heis6_plan(
            Method::Tepai,
            SIX_Q_T_TOTAL,
            SIX_Q_LEVEL,
            m,
            n_s,
            None,
            SIX_Q_SEED,
        );
        let out = driver::run_experiment(&plan).unwrap();
        let spectrum = spectroscopy::analyze(&out.set, observables6(), &cfg).unwrap();
        heights.push(peak_height_near(&spectrum, run.gap, run.bin));
        sigmas.push(bootstrap_peak_sigma(
            &out.set,
            run.gap,
            run.bin,
            30,
            82 + m as u64,
        ));
    }

    for i in 0..heights.len() {
        for j in i + 1..heights.len() {
            let dev = (heights[i] - heights[j]).abs();
            let tol = 3.0 * (sigmas[i] * sigmas[i] + sigmas[j] * sigmas[j]).sqrt();
            assert!(
                dev <= tol,
                "split peak heights {heights:?} differ beyond 3σ (|Δ| = {dev:.3}, tol {tol:.3})"
            );
        }
    }
    let trotter_height = peak_height_near(&run.trotter_spectrum, run.gap, run.bin);
    for (idx, h) in heights.iter().enumerate() {
        assert!(
            trotter_height > *h,
            "trotter peak {trotter_height:.3} not above tepai split {idx} ({h:.3})"
        );
    }
    pass(
        "criterion 8 (split invariance)",
        t0,
        &format!(
            "tepai peak heights {:?} (bootstrap σ {:?}); trotter {trotter_height:.2}",
            heights
                .iter()
                .map(|h| (h * 100.0).round() / 100.0)
                .collect::<Vec<_>>(),
            sigmas
                .iter()
                .map(|s| (s * 100.0).round() / 100.0)
                .collect::<Vec<_>>()
        ),
    );
}

/// Criterion 9 — with depolarizing noise (p1 = 1e-4, p2 = 1e-3) the
/// TE-PAI spectrum retains its gap-bin weight better than Trotter on
/// every seed, and the sampled circuits run at ≤ 0.6× the Trotter
/// depth. Uses a level-48 superposition (gap 13.11) on a short grid
/// (t = 1.5) where the interpolation skips ~90% of the gates.
#[test]
fn criterion_9_noise_robustness() {
    let t0 = Instant::now();
    let h = Hamiltonian::heisenberg_chain(6, 1.0, 1.0, 1.0).unwrap();
    let eig = eigen::eigendecompose(&h).unwrap();
    let level = 48;
    let gap = eig.gap(0, level);
    let t_total = 1.5;
    let noise = NoiseModel::new(1e-4, 1e-3).unwrap();
    let cfg = SpectroscopyConfig::default();

    let mut depth_ratio_worst: f64 = 0.0;
    let mut details = format!("gap {gap:.4};");
    for seed in [101u64, 102, 103] {
        let mut retention = [0.0f64; 2];
        for (mi, method) in [Method::Tepai, Method::Trotter].into_iter().enumerate() {
            let mut lambda = [0.0f64; 2];
            for (ni, nm) in [None, Some(noise)].into_iter().enumerate() {
                let plan = heis6_plan(method, t_total, level, 3000, 1, nm, seed);
                let out = driver::run_experiment(&plan).unwrap();
                let spectrum = spectroscopy::analyze(&out.set, observables6(), &cfg).unwrap();
                lambda[ni] = spectrum.lambda_near(gap);
                if method == Method::Tepai && nm.is_none() {
                    let rep = report::build_report(&plan, &out, "", 0.0);
                    depth_ratio_worst = depth_ratio_worst.max(rep.depth_ratio);
                }
            }
            retention[mi] = lambda[1] / lambda[0];
        }
        assert!(
            retention[0] > retention[1],
            "seed {seed}: tepai retention {:.3} not above trotter {:.3}",
            retention[0],
            retention[1]
        );
        details.push_str(&format!(
            " seed {seed}: tepai {:.3} vs trotter {:.3};",
            retention[0], retention[1]
        ));
    }
    assert!(
        depth_ratio_worst <= 0.6,
        "mean tepai depth ratio {depth_ratio_worst:.3} above 0.6"
    );
    details.push_str(&format!(" depth ratio {depth_ratio_worst:.3}"));
    pass("criterion 9 (noise robustness)", t0, &details);
}

/// Criterion 10 — the closed-form TFIM gap agrees with dense
/// diagonalization within 2% at N ∈ {4, 6, 8}; the N = 20 value is the
/// reference for the slow optional simulation.
#[test]
fn criterion_10_tfim_gap_formula() {
    let t0 = Instant::now();
    let mut details = String::new();
    for n in [4usize, 6, 8] {
        let h = Hamiltonian::tfim_chain(n, 0.1, 2.0).unwrap();
        let eig = eigen::eigendecompose(&h).unwrap();
        let diag = eig.gap(0, 1);
        let formula = tfim_gap(n, 0.1, 2.0);
        let rel = (diag - formula).abs() / diag;
        assert!(
            rel < 0.02,
            "N={n}: formula {formula:.5} vs diag {diag:.5} ({:.3}%)",
            rel * 100.0
        );
        details.push_str(&format!(" N={n}: {:.4}%;", rel * 100.0));
    }
    let reference = tfim_gap(20, 0.1, 2.0);
    assert!(
        (reference - 3.8024).abs() < 5e-4,
        "N=20 reference {reference:.5}"
    );
    pass(
        "criterion 10 (tfim gap formula)",
        t0,
        &format!("rel errors{details} N=20 reference {reference:.4}"),
    );
}

/// Paper-scale 10-qubit reproduction (slow; run with `--ignored`).
///
/// The Trotter leg runs the published grid (N_t = 90, dt = 0.11,
/// K = 650, 1000 executions/point) and must place the top peak within
/// one unpadded bin of 4.3595. The published TE-PAI angle Δ = π/2⁷ is
/// smaller than the largest scheduled rotation angle 2·t/K ≈ 0.0305
/// under the θ = 2hδ convention, so the decomposition domain forces the
/// next dyadic angle π/2⁶ for the TE-PAI leg; its spectrum is produced
/// and reported, and its weights are checked for consistency.
#[test]
#[ignore]
fn slow_paper_scale_heisenberg_10_qubits() {
    let t0 = Instant::now();
    let h = Hamiltonian::heisenberg_chain(10, 1.0, 1.0, 1.0).unwrap();
    let (initial, degenerate) = InitialState::EigenSuperposition {
        levels: vec![0, 10],
        weights: None,
    }
    .build(&h)
    .unwrap();
    let grid = TimeGrid::new(9.9, 90, 650).unwrap();
    let obs = ObservableSet::enumerate(10, 3, ObservableMode::AllSubsets).unwrap();
    let cfg = SpectroscopyConfig::default();
    let gap = 4.3595;
    let bin = 2.0 * PI / 9.9;

    let trotter = ExperimentPlan::new(
        h.clone(),
        initial.clone(),
        degenerate,
        grid,
        SamplingConfig {
            method: Method::Trotter,
            delta: 0.0,
            m_samples: 1,
            shots_per_sample: 1000,
            noise: None,
            noise_on_measurement: true,
            seed: 7,
        },
    )
    .unwrap();
    let out = driver::run_experiment(&trotter).unwrap();
    let spectrum = spectroscopy::analyze(&out.set, &obs, &cfg).unwrap();
    let top = spectrum.peaks.first().expect("trotter peak");
    assert!(
        (top.omega - gap).abs() <= bin,
        "trotter top peak {:.4} vs 4.3595 (bin {bin:.4})",
        top.omega
    );
    println!(
        "10q trotter peak {:.4} (λ {:.2}) after {:.1?}",
        top.omega,
        top.lambda,
        t0.elapsed()
    );

    // TE-PAI leg at the smallest feasible dyadic angle.
    let delta = PI / 64.0;
    let tepai = ExperimentPlan::new(
        h.clone(),
        initial,
        degenerate,
        grid,
        SamplingConfig {
            method: Method::Tepai,
            delta,
            m_samples: 1000,
            shots_per_sample: 1,
            noise: None,
            noise_on_measurement: true,
            seed: 7,
        },
    )
    .unwrap();
    let out = driver::run_experiment(&tepai).unwrap();
    // Weight consistency: every sample at the final point carries the
    // same |Γ| as the schedule's exact product.
    let expected_gamma = evolution::gamma_exact(&h, 9.9, 650, delta).unwrap();
    for c in out.cells.iter().filter(|c| c.s == 90) {
        assert!((c.gamma.abs() - expected_gamma).abs() < 1e-9 * expected_gamma);
    }
    let spectrum = spectroscopy::analyze(&out.set, &obs, &cfg).unwrap();
    for p in spectrum.peaks.iter().take(5) {
        println!(
            "10q tepai (Δ = π/2⁶) peak omega={:.4} lambda={:.3}",
            p.omega, p.lambda
        );
    }
    pass(
        "slow 10-qubit paper-scale reproduction",
        t0,
        &format!(
            "trotter peak {:.4}, |Γ|(t=9.9) = {expected_gamma:.1}",
            top.omega
        ),
    );
}

/// Slow optional 20-qubit TFIM run (noise-free, Trotter evolution,
/// scaled execution budget); the closed-form gap 3.8024 is the
/// reference. Run with `--ignored`.
#[test]
#[ignore]
fn slow_tfim_20_qubits_noise_free() {
    let t0 = Instant::now();
    let h = Hamiltonian::tfim_chain(20, 0.1, 2.0).unwrap();
    let initial = InitialState::Product(format!("{}0", "+".repeat(19)));
    let (psi, degenerate) = initial.build(&h).unwrap();
    let grid = TimeGrid::new(80.0 * 0.037, 80, 115).unwrap();
    let plan = ExperimentPlan::new(
        h,
        psi,
        degenerate,
        grid,
        SamplingConfig {
            method: Method::Trotter,
            delta: 0.0,
            // 600 executions/point keeps the dense 2^20 measurement
            // stage inside the slow-test budget.
            m_samples: 1,
            shots_per_sample: 600,
            noise: None,
            noise_on_measurement: true,
            seed: 20,
        },
    )
    .unwrap();
    let out = driver::run_experiment(&plan).unwrap();
    let obs = ObservableSet::enumerate(20, 3, ObservableMode::AllSubsets).unwrap();
    let spectrum = spectroscopy::analyze(&out.set, &obs, &SpectroscopyConfig::default()).unwrap();
    let gap = tfim_gap(20, 0.1, 2.0);
    let bin = 2.0 * PI / (80.0 * 0.037);
    let top = spectrum.peaks.first().expect("peak");
    assert!(
        (top.omega - gap).abs() <= bin,
        "top peak {:.4} vs formula gap {gap:.4} (bin {bin:.4})",
        top.omega
    );
    pass(
        "slow 20-qubit tfim",
        t0,
        &format!(
            "peak {:.4} vs formula {gap:.4} (λ {:.2})",
            top.omega, top.lambda
        ),
    );
}
