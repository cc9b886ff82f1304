//! Self-validation suite: the oracle checks behind `gapscope validate`.
//!
//! Every check compares a fast implementation path against an
//! independent reference — dense superoperators, exhaustive branch
//! enumeration, closed-form limits, or synthetic signals — and reports
//! one pass/fail line. The whole suite runs in seconds.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gapscope_core::eigen;
use gapscope_core::evolution::{
    self, expected_gate_count_asymptotic, overhead_asymptotic, PaiCoefficients, PaiSchedule,
    TimeGrid,
};
use gapscope_core::hamiltonian::Hamiltonian;
use gapscope_core::pauli::{Pauli, PauliString};
use gapscope_core::shadows::{
    estimate_observable, variance_bound, ExperimentPlan, Method, SamplingConfig,
};
use gapscope_core::spectroscopy::{find_gap_peaks, spectral_function};
use gapscope_core::statevector::StateVector;
use gapscope_core::C64;

use crate::dense;

/// Outcome of one validation check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    /// Short stable name.
    pub name: &'static str,
    /// Whether the check passed.
    pub passed: bool,
    /// Human-readable measurement summary.
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

/// Run every check with the given master seed.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        check_decomposition_identity(seed),
        check_channel_unbiasedness(seed),
        check_estimator_unbiasedness(seed),
        check_variance_bound(seed),
        check_gate_count(seed),
        check_gamma_limit(),
        check_trotter_bound(),
        check_synthetic_spectrum(),
    ]
}

/// Max superoperator-entry gap of the three-branch decomposition for
/// one (axis, θ, Δ), with an optional additive perturbation of the
/// coefficients (used by the tamper test).
pub fn decomposition_gap(axis: Pauli, theta: f64, delta: f64, perturb: [f64; 3]) -> f64 {
    let p = PauliString::single(1, 0, axis);
    let c = PaiCoefficients::new(theta, delta).expect("domain");
    let coeffs = [c.a1 + perturb[0], c.a2 + perturb[1], c.a3 + perturb[2]];
    let exact = dense::superop(&dense::rotation_matrix(&p, theta), 2);
    let phi = if theta < 0.0 { -delta } else { delta };
    let branches = [
        dense::superop_identity(2),
        dense::superop(&dense::rotation_matrix(&p, phi), 2),
        dense::superop(&dense::rotation_matrix(&p, std::f64::consts::PI), 2),
    ];
    let mut gap: f64 = 0.0;
    for idx in 0..16 {
        let mut acc = C64::new(0.0, 0.0);
        for (a, b) in coeffs.iter().zip(&branches) {
            acc += b[idx] * *a;
        }
        gap = gap.max((acc - exact[idx]).norm());
    }
    gap
}

fn check_decomposition_identity(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1);
    let mut max_gap: f64 = 0.0;
    let mut max_sum_err: f64 = 0.0;
    for _ in 0..200 {
        let delta = rng.random::<f64>() * (std::f64::consts::PI - 0.02) + 0.01;
        let theta = (rng.random::<f64>() * 2.0 - 1.0) * delta;
        let axis = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
        max_gap = max_gap.max(decomposition_gap(axis, theta, delta, [0.0; 3]));
        let c = PaiCoefficients::new(theta, delta).expect("domain");
        max_sum_err = max_sum_err.max((c.a1 + c.a2 + c.a3 - 1.0).abs());
    }
    CheckResult::new(
        "decomposition-identity",
        max_gap < 1e-12 && max_sum_err < 1e-12,
        format!("max superop gap {max_gap:.2e}, max |Σa - 1| {max_sum_err:.2e} over 200 draws"),
    )
}

/// Weighted enumeration of every branch assignment must reproduce the
/// Trotter channel exactly (2 qubits, up to 6 gates).
fn check_channel_unbiasedness(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2);
    let mut worst: f64 = 0.0;
    for k_steps in 1..=3usize {
        let hx = 0.3 + 0.4 * rng.random::<f64>();
        let hz = -0.5 * rng.random::<f64>() - 0.1;
        let h = Hamiltonian::new(
            2,
            vec![(hx, "XX".parse().unwrap()), (hz, "IZ".parse().unwrap())],
        );
        let t = 0.5;
        let delta = 0.9;
        let circuit = evolution::trotter_circuit(&h, t, k_steps).expect("steps >= 1");
        let gates: Vec<(PauliString, f64)> =
            circuit.gates().iter().map(|g| (g.axis, g.angle)).collect();
        let dim = 4;
        let sdim = 16;
        let mut exact = dense::superop_identity(dim);
        for (axis, angle) in &gates {
            exact = dense::matmul(
                &dense::superop(&dense::rotation_matrix(axis, *angle), dim),
                &exact,
                sdim,
            );
        }
        let mut total = vec![C64::new(0.0, 0.0); sdim * sdim];
        for assignment in 0..3usize.pow(gates.len() as u32) {
            let mut weight = 1.0;
            let mut acc = dense::superop_identity(dim);
            let mut code = assignment;
            for (axis, angle) in &gates {
                let d = code % 3;
                code /= 3;
                let c = PaiCoefficients::new(*angle, delta).expect("domain");
                let (a, gate_angle) = match d {
                    0 => (c.a1, None),
                    1 => (c.a2, Some(if *angle < 0.0 { -delta } else { delta })),
                    _ => (c.a3, Some(std::f64::consts::PI)),
                };
                weight *= a;
                if let Some(ga) = gate_angle {
                    acc = dense::matmul(
                        &dense::superop(&dense::rotation_matrix(axis, ga), dim),
                        &acc,
                        sdim,
                    );
                }
            }
            for (t_entry, a_entry) in total.iter_mut().zip(&acc) {
                *t_entry += a_entry * weight;
            }
        }
        let gap = total
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(gap);
    }
    CheckResult::new(
        "channel-unbiasedness",
        worst < 1e-10,
        format!("max channel gap {worst:.2e} over exhaustive enumerations up to 6 gates"),
    )
}

/// The toy instance used by the estimator-level checks:
/// H = XX + Z on qubit 1, t = 0.7, K = 4, Δ = π/4, O = Z_0, |00> input.
pub fn toy_instance() -> (Hamiltonian, PauliString, f64, usize, f64) {
    let h = Hamiltonian::new(
        2,
        vec![(1.0, "XX".parse().unwrap()), (1.0, "IZ".parse().unwrap())],
    );
    (h, "ZI".parse().unwrap(), 0.7, 4, std::f64::consts::PI / 4.0)
}

fn toy_plan(m: usize, n_s: usize, seed: u64) -> ExperimentPlan {
    let (h, _, t, k, delta) = toy_instance();
    ExperimentPlan::new(
        h,
        StateVector::zero(2),
        false,
        TimeGrid::new(t, 1, k).expect("valid grid"),
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
    .expect("valid plan")
}

fn check_estimator_unbiasedness(seed: u64) -> CheckResult {
    let (h, z0, t, k, _) = toy_instance();
    let exact = dense::trotter_expectation_from_zero(&h, t, k, &z0);
    let plan = toy_plan(20_000, 1, seed ^ 0x3);
    let out = plan.run().expect("run");
    let records = out.set.records_at(1);
    let est = estimate_observable(records, &z0).expect("records");
    // Empirical standard error of the mean.
    let mean = est;
    let var: f64 = records
        .iter()
        .map(|r| {
            let o = r.gamma * gapscope_core::shadows::snapshot_estimate(r, &z0);
            (o - mean) * (o - mean)
        })
        .sum::<f64>()
        / (records.len() - 1) as f64;
    let se = (var / records.len() as f64).sqrt();
    let dev = (est - exact).abs();
    CheckResult::new(
        "estimator-unbiasedness",
        dev <= 5.0 * se,
        format!(
            "estimate {est:.5} vs dense {exact:.5}; |Δ| = {dev:.2e} <= 5·SE = {:.2e}",
            5.0 * se
        ),
    )
}

/// Exact estimator variance of the toy instance by exhaustive branch
/// enumeration (3^8 circuits), plus a Monte-Carlo repetition study.
fn check_variance_bound(seed: u64) -> CheckResult {
    let (h, z0, t, k, delta) = toy_instance();
    // Enumerate branch circuits: probabilities, signs, and <Z0>.
    let circuit = evolution::trotter_circuit(&h, t, k).expect("steps");
    let gates: Vec<(PauliString, f64)> =
        circuit.gates().iter().map(|g| (g.axis, g.angle)).collect();
    let n_gates = gates.len();
    let gamma_abs = evolution::gamma_exact(&h, t, k, delta).expect("domain");
    let gamma_sq = gamma_abs * gamma_abs;
    let mut mu = 0.0;
    let mut e_w2 = 0.0;
    let dim = 4;
    for assignment in 0..3usize.pow(n_gates as u32) {
        let mut prob = 1.0;
        let mut sign = 1.0;
        let mut psi = vec![C64::new(0.0, 0.0); dim];
        psi[0] = C64::new(1.0, 0.0);
        let mut code = assignment;
        for (axis, angle) in &gates {
            let d = code % 3;
            code /= 3;
            let c = PaiCoefficients::new(*angle, delta).expect("domain");
            let p = c.probabilities();
            let (a, pd, gate_angle) = match d {
                0 => (c.a1, p[0], None),
                1 => (c.a2, p[1], Some(if *angle < 0.0 { -delta } else { delta })),
                _ => (c.a3, p[2], Some(std::f64::consts::PI)),
            };
            prob *= pd;
            sign *= if a < 0.0 { -1.0 } else { 1.0 };
            if prob == 0.0 {
                break;
            }
            if let Some(ga) = gate_angle {
                psi = dense::matvec(&dense::rotation_matrix(axis, ga), &psi);
            }
        }
        if prob == 0.0 {
            continue;
        }
        let w = dense::expectation(&dense::pauli_matrix(&z0), &psi);
        mu += prob * sign * gamma_abs * w;
        e_w2 += prob * w * w;
    }
    let dense_mu = dense::trotter_expectation_from_zero(&h, t, k, &z0);
    let mu_gap = (mu - dense_mu).abs();

    // Exact Var[<Ô>] and the Theorem-2 bound per split. The shadow
    // second moment of a weight-1 Pauli is exactly 3, state-independent.
    let splits = [(1000usize, 1usize), (500, 2), (250, 4)];
    let mut detail = format!("enumerated mean gap {mu_gap:.2e};");
    let mut pass = mu_gap < 1e-10;
    for (m, n_s) in splits {
        let ns = n_s as f64;
        let exact_var =
            (3.0 * gamma_sq / ns + (1.0 - 1.0 / ns) * gamma_sq * e_w2 - mu * mu) / m as f64;
        let bound = variance_bound(gamma_sq, 1, m, n_s);
        pass &= exact_var <= bound;

        // Monte-Carlo repetition study at the same split.
        let reps = 200;
        let mut estimates = Vec::with_capacity(reps);
        for rep in 0..reps {
            let plan = toy_plan(m, n_s, (seed ^ 0x4) * 100_000 + rep as u64);
            let out = plan.run().expect("run");
            estimates.push(estimate_observable(out.set.records_at(1), &z0).expect("records"));
        }
        let mean = estimates.iter().sum::<f64>() / reps as f64;
        let mc_var = estimates
            .iter()
            .map(|e| (e - mean) * (e - mean))
            .sum::<f64>()
            / (reps - 1) as f64;
        pass &= mc_var <= bound;
        detail.push_str(&format!(
            " (M={m},Ns={n_s}): exact/bound {:.4}, mc/bound {:.4};",
            exact_var / bound,
            mc_var / bound
        ));
    }
    CheckResult::new("variance-bound", pass, detail)
}

fn check_gate_count(seed: u64) -> CheckResult {
    let h = Hamiltonian::new(1, vec![(1.0, "Z".parse().unwrap())]);
    let k = 1000;
    let delta = std::f64::consts::PI / 4.0;
    let schedule = PaiSchedule::new(&h, 1.0 / k as f64, delta).expect("domain");
    let samples = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let nu = schedule.sample(k, &mut rng).gate_count as f64;
        sum += nu;
        sum_sq += nu * nu;
    }
    let mean = sum / samples as f64;
    let var = sum_sq / samples as f64 - mean * mean;
    let sigma_mean = (var / samples as f64).sqrt();
    let formula = expected_gate_count_asymptotic(1.0, 1.0, delta);
    let dev = (mean - formula).abs();
    // The asymptotic formula carries an O(1/K) bias beyond the MC error.
    let tol = 5.0 * sigma_mean + 0.02;
    CheckResult::new(
        "gate-count",
        dev <= tol,
        format!("MC mean {mean:.4} vs formula {formula:.4} (tol {tol:.4})"),
    )
}

fn check_gamma_limit() -> CheckResult {
    let h = Hamiltonian::new(1, vec![(1.0, "Z".parse().unwrap())]);
    let delta = std::f64::consts::PI / 4.0;
    let target = overhead_asymptotic(1.0, 1.0, delta);
    let g = evolution::gamma_exact(&h, 1.0, 1000, delta).expect("domain");
    let rel = (g - target).abs() / target;
    CheckResult::new(
        "gamma-limit",
        rel < 0.02,
        format!(
            "Γ(K=1000) = {g:.5} vs asymptotic {target:.5} (rel gap {:.3}%)",
            rel * 100.0
        ),
    )
}

fn check_trotter_bound() -> CheckResult {
    let h = Hamiltonian::heisenberg_chain(3, 1.0, 1.0, 1.0).expect("n >= 2");
    let eig = eigen::eigendecompose(&h).expect("small");
    let psi0 = StateVector::product("100").expect("valid");
    let z0: PauliString = "ZII".parse().expect("valid");
    let mut pass = true;
    let mut worst_ratio: f64 = 0.0;
    for &t in &[0.5, 1.0, 2.0] {
        let exact = eigen::exact_expectation_series(&eig, &psi0, &z0, &[t])[0];
        for &k in &[4usize, 16, 64] {
            let circuit = evolution::trotter_circuit(&h, t, k).expect("steps");
            let mut psi = psi0.clone();
            psi.apply_circuit(&circuit);
            let err = (psi.expectation_pauli(&z0) - exact).abs();
            let bound = evolution::trotter_error_bound(&h, 1.0, t, k);
            pass &= err <= bound;
            if bound > 0.0 {
                worst_ratio = worst_ratio.max(err / bound);
            }
        }
    }
    CheckResult::new(
        "trotter-bound",
        pass,
        format!("empirical error <= bound on the (t, K) grid; worst ratio {worst_ratio:.3}"),
    )
}

fn check_synthetic_spectrum() -> CheckResult {
    let n_t = 64;
    let dt = 0.15;
    let omega0 = 2.8;
    let v: Vec<f64> = (0..n_t).map(|n| (omega0 * n as f64 * dt).cos()).collect();
    let spectrum = spectral_function(&[v], dt, 4);
    let peaks = find_gap_peaks(&spectrum, 2, 0.2).expect("bins");
    let found = peaks.first().map(|p| p.omega).unwrap_or(f64::NAN);
    let ok = (found - omega0).abs() < 0.5 * spectrum.bin_width();
    CheckResult::new(
        "synthetic-spectrum",
        ok,
        format!(
            "injected ω = {omega0}, recovered {found:.4} (half-bin {:.4})",
            0.5 * spectrum.bin_width()
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_at_the_default_seed() {
        let results = run_all(1);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
        assert_eq!(results.len(), 8);
    }

    #[test]
    fn tampered_coefficients_fail_the_identity() {
        // Negative control: a perturbed a2 must blow the 1e-12 gate.
        let gap = decomposition_gap(Pauli::X, 0.4, 0.9, [0.0, 0.01, 0.0]);
        assert!(gap > 1e-12, "gap {gap}");
    }
}
