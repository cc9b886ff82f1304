//! Scalar statistics: log-gamma, regularized incomplete gamma, the
//! chi-squared survival function, and the Ljung-Box portmanteau test.
//!
//! The survival function is computed from the regularized upper
//! incomplete gamma with the usual series / continued-fraction split at
//! `x = a + 1`, targeting ~1e-12 absolute accuracy — no external
//! statistics dependency.

use alloc::vec::Vec;

use crate::math;

/// ln Γ(x) for x > 0 (Lanczos, g = 7, 9 coefficients).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    assert!(x > 0.0, "ln_gamma domain");
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1-x) = π / sin(πx).
        return math::ln(math::PI / math::sin(math::PI * x)) - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * math::ln(2.0 * math::PI) + (x + 0.5) * math::ln(t) - t + math::ln(a)
}

const GAMMA_EPS: f64 = 1e-15;
const GAMMA_MAX_ITER: usize = 500;

/// Regularized lower incomplete gamma P(a, x) by series expansion
/// (valid branch: x < a + 1).
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..GAMMA_MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if math::abs(term) < math::abs(sum) * GAMMA_EPS {
            break;
        }
    }
    sum * math::exp(-x + a * math::ln(x) - ln_gamma(a))
}

/// Regularized upper incomplete gamma Q(a, x) by modified Lentz
/// continued fraction (valid branch: x >= a + 1).
fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if math::abs(d) < tiny {
            d = tiny;
        }
        c = b + an / c;
        if math::abs(c) < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if math::abs(delta - 1.0) < GAMMA_EPS {
            break;
        }
    }
    math::exp(-x + a * math::ln(x) - ln_gamma(a)) * h
}

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "incomplete gamma domain");
    if x == 0.0 {
        0.0
    } else if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "incomplete gamma domain");
    if x == 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

/// Chi-squared survival function with `dof` degrees of freedom.
pub fn chi_squared_sf(x: f64, dof: usize) -> f64 {
    assert!(dof >= 1, "chi-squared needs dof >= 1");
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(dof as f64 / 2.0, x / 2.0)
}

/// Ljung-Box portmanteau test of the white-noise null.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LjungBox {
    /// Q = n(n+2) Σ_{k=1..h} r_k² / (n-k).
    pub statistic: f64,
    /// Chi-squared survival of Q at h degrees of freedom.
    pub p_value: f64,
    /// Number of lags h.
    pub lags: usize,
}

/// Run the Ljung-Box test on one series with `lags` autocorrelation
/// lags. A zero-variance series returns Q = 0, p = 1 (nothing for the
/// test to see).
pub fn ljung_box(series: &[f64], lags: usize) -> LjungBox {
    let n = series.len();
    assert!(lags >= 1 && lags < n, "need 1 <= lags < series length");
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let denom: f64 = centered.iter().map(|x| x * x).sum();
    if denom <= 0.0 {
        return LjungBox {
            statistic: 0.0,
            p_value: 1.0,
            lags,
        };
    }
    let mut q = 0.0;
    for k in 1..=lags {
        let r_k: f64 = centered[k..]
            .iter()
            .zip(&centered)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / denom;
        q += r_k * r_k / (nf - k as f64);
    }
    q *= nf * (nf + 2.0);
    LjungBox {
        statistic: q,
        p_value: chi_squared_sf(q, lags),
        lags,
    }
}

/// Default lag count `min(10, n/5)`, clamped to the valid range.
pub fn default_lb_lags(n_t: usize) -> usize {
    (n_t / 5).clamp(1, 10).min(n_t.saturating_sub(1).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Closed form for even dof: sf(x, 2m) = e^{-x/2} Σ_{j<m} (x/2)^j / j!.
    fn chi2_sf_even_oracle(x: f64, m: usize) -> f64 {
        let half = x / 2.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..m {
            term *= half / j as f64;
            sum += term;
        }
        math::exp(-half) * sum
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(2.0)).abs() < 1e-14);
        assert!((ln_gamma(5.0) - math::ln(24.0)).abs() < 1e-12);
        assert!((ln_gamma(0.5) - math::ln(math::sqrt(math::PI))).abs() < 1e-12);
        // Γ(11) = 10!
        assert!((ln_gamma(11.0) - math::ln(3_628_800.0)).abs() < 1e-10);
    }

    #[test]
    fn chi_squared_matches_even_dof_closed_form() {
        for m in [1usize, 2, 4, 5] {
            for &x in &[0.05, 0.5, 1.0, 3.0, 7.7, 15.0, 40.0] {
                let got = chi_squared_sf(x, 2 * m);
                let want = chi2_sf_even_oracle(x, m);
                assert!(
                    (got - want).abs() < 1e-12,
                    "dof={} x={x}: {got} vs {want}",
                    2 * m
                );
            }
        }
    }

    #[test]
    fn chi_squared_reference_quantiles() {
        // Textbook critical values.
        assert!((chi_squared_sf(3.841458820694124, 1) - 0.05).abs() < 1e-10);
        assert!((chi_squared_sf(18.307038053275146, 10) - 0.05).abs() < 1e-10);
        assert!((chi_squared_sf(23.209251158954356, 10) - 0.01).abs() < 1e-10);
    }

    #[test]
    fn chi_squared_shape() {
        assert_eq!(chi_squared_sf(0.0, 3), 1.0);
        assert_eq!(chi_squared_sf(-1.0, 3), 1.0);
        let mut prev = 1.0;
        for i in 1..50 {
            let p = chi_squared_sf(i as f64 * 0.5, 4);
            assert!(p < prev && p > 0.0);
            prev = p;
        }
    }

    #[test]
    fn gamma_p_q_complement() {
        for &a in &[0.5, 1.0, 2.5, 10.0] {
            for &x in &[0.1, 0.9, 2.0, 11.0, 30.0] {
                assert!((gamma_p(a, x) + gamma_q(a, x) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn ljung_box_flags_sinusoids_not_noise() {
        let n = 90;
        let sine: Vec<f64> = (0..n).map(|i| math::sin(0.4 * i as f64)).collect();
        let lb = ljung_box(&sine, 10);
        assert!(lb.p_value < 1e-6, "sinusoid p = {}", lb.p_value);

        let mut rng = ChaCha8Rng::seed_from_u64(97);
        let noise: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let lb = ljung_box(&noise, 10);
        assert!(lb.statistic >= 0.0);
        assert!(lb.p_value > 1e-4, "white noise rejected far too hard");
    }

    #[test]
    fn ljung_box_constant_series() {
        let flat = [2.5; 40];
        let lb = ljung_box(&flat, 8);
        assert_eq!(lb.statistic, 0.0);
        assert_eq!(lb.p_value, 1.0);
    }

    #[test]
    fn ljung_box_pvalues_roughly_uniform_under_null() {
        // Calibration: i.i.d. rows should give ~uniform p-values.
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let rows = 1000;
        let n = 64;
        let mut pvals: Vec<f64> = (0..rows)
            .map(|_| {
                let row: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
                ljung_box(&row, 10).p_value
            })
            .collect();
        pvals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Kolmogorov-Smirnov distance against U(0,1).
        let mut ks: f64 = 0.0;
        for (i, p) in pvals.iter().enumerate() {
            let emp_hi = (i + 1) as f64 / rows as f64;
            let emp_lo = i as f64 / rows as f64;
            ks = ks.max((emp_hi - p).abs()).max((p - emp_lo).abs());
        }
        assert!(ks < 0.1, "KS distance {ks}");
    }

    #[test]
    fn default_lags() {
        assert_eq!(default_lb_lags(90), 10);
        assert_eq!(default_lb_lags(30), 6);
        assert_eq!(default_lb_lags(8), 1);
    }
}
