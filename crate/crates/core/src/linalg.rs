//! Dense symmetric / Hermitian eigensolvers and small-matrix helpers.
//!
//! Classic two-stage scheme: Householder reduction to tridiagonal form,
//! then implicit QL iteration with shifts (the tred2/tql2 lineage),
//! accumulating the transformations so eigenvectors come out orthonormal
//! even across degenerate clusters. Real symmetric input has a dedicated
//! path; Hermitian input is reduced with complex Householder reflectors
//! and a diagonal phase rotation that makes the tridiagonal form real,
//! after which the same QL core runs.
//!
//! Sizes here are modest (Hamiltonians up to 2^14, Gram matrices up to a
//! few hundred, per-bin cross-correlation matrices of order ~5), so the
//! O(n³) dense algorithms are the right tool.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::C64;

/// Eigendecomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Column-major eigenvectors; column k pairs with `eigenvalues[k]`.
    pub eigenvectors: Vec<f64>,
}

/// Eigendecomposition of a complex Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues, ascending (real).
    pub eigenvalues: Vec<f64>,
    /// Column-major eigenvectors; column k pairs with `eigenvalues[k]`.
    pub eigenvectors: Vec<C64>,
}

const MAX_QL_ITERATIONS: usize = 80;

#[inline]
fn flt_sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        math::abs(a)
    } else {
        -math::abs(a)
    }
}

/// Householder reduction of a real symmetric matrix (row-major, n×n,
/// destroyed) to tridiagonal form; on return `a` holds the accumulated
/// orthogonal transform Q with QᵀAQ = tridiag(d, e).
fn tred2(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += math::abs(a[i * n + k]);
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 {
                    -math::sqrt(h)
                } else {
                    math::sqrt(h)
                };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[j * n + i] = a[i * n + j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        let l = i;
        if d[i] != 0.0 {
            for j in 0..l {
                let mut g = 0.0;
                for k in 0..l {
                    g += a[i * n + k] * a[k * n + j];
                }
                for k in 0..l {
                    a[k * n + j] -= g * a[k * n + i];
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = 1.0;
        for j in 0..l {
            a[j * n + i] = 0.0;
            a[i * n + j] = 0.0;
        }
    }
}

/// Implicit QL with shifts on a real tridiagonal (d = diagonal, e =
/// subdiagonal with e[0] unused on input). Eigenvalues land in `d`;
/// every plane rotation is reported to `rotate(col_i, col_i1, s, c)` so
/// the caller can accumulate eigenvectors in its own scalar type.
fn tql2<F: FnMut(usize, usize, f64, f64)>(d: &mut [f64], e: &mut [f64], n: usize, mut rotate: F) {
    if n <= 1 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = math::abs(d[m]) + math::abs(d[m + 1]);
                if math::abs(e[m]) <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= MAX_QL_ITERATIONS, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + flt_sign(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = math::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                rotate(i, i + 1, s, c);
                f = 0.0;
                let _ = f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

fn sort_ascending(d: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("NaN eigenvalue"));
    idx
}

/// Full eigendecomposition of a real symmetric matrix (row-major).
pub fn symmetric_eigen(mut a: Vec<f64>, n: usize) -> SymmetricEigen {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return SymmetricEigen {
            eigenvalues: Vec::new(),
            eigenvectors: Vec::new(),
        };
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 1 {
        return SymmetricEigen {
            eigenvalues: vec![a[0]],
            eigenvectors: vec![1.0],
        };
    }
    tred2(&mut a, n, &mut d, &mut e);
    {
        let z = &mut a;
        tql2(&mut d, &mut e, n, |i, i1, s, c| {
            for k in 0..n {
                let f = z[k * n + i1];
                z[k * n + i1] = s * z[k * n + i] + c * f;
                z[k * n + i] = c * z[k * n + i] - s * f;
            }
        });
    }
    let order = sort_ascending(&d);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        eigenvalues.push(d[src]);
        for k in 0..n {
            eigenvectors[col * n + k] = a[k * n + src];
        }
    }
    SymmetricEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// Full eigendecomposition of a complex Hermitian matrix (row-major).
pub fn hermitian_eigen(mut a: Vec<C64>, n: usize) -> HermitianEigen {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return HermitianEigen {
            eigenvalues: Vec::new(),
            eigenvectors: Vec::new(),
        };
    }
    if n == 1 {
        return HermitianEigen {
            eigenvalues: vec![a[0].re],
            eigenvectors: vec![C64::new(1.0, 0.0)],
        };
    }
    // Accumulated unitary, row-major, starts as identity.
    let mut q = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        q[i * n + i] = C64::new(1.0, 0.0);
    }
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut w = vec![C64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        // Reflect column k below the subdiagonal onto e_{k+1}.
        let mut col_norm_sqr = 0.0;
        for r in k + 1..n {
            col_norm_sqr += a[r * n + k].norm_sqr();
        }
        let col_norm = math::sqrt(col_norm_sqr);
        if col_norm < 1e-300 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * col_norm;
        for item in v.iter_mut() {
            *item = C64::new(0.0, 0.0);
        }
        v[k + 1] = x0 - alpha;
        for r in k + 2..n {
            v[r] = a[r * n + k];
        }
        let vnorm_sqr: f64 = (k + 1..n).map(|r| v[r].norm_sqr()).sum();
        if vnorm_sqr < 1e-300 {
            continue;
        }
        let inv = 1.0 / math::sqrt(vnorm_sqr);
        for item in v.iter_mut().take(n).skip(k + 1) {
            *item *= inv;
        }
        // w = A v (A Hermitian, v supported on k+1..n).
        for r in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for c in k + 1..n {
                acc += a[r * n + c] * v[c];
            }
            w[r] = acc;
        }
        let kappa: f64 = (k + 1..n).map(|r| (v[r].conj() * w[r]).re).sum();
        // A <- A - 2 v q† - 2 q v†  with q = w - κ v.
        for r in 0..n {
            w[r] -= v[r] * kappa;
        }
        for r in 0..n {
            let vr = v[r];
            let wr = w[r];
            for c in 0..n {
                let delta = vr * w[c].conj() + wr * v[c].conj();
                a[r * n + c] -= delta * 2.0;
            }
        }
        // Q <- Q (I - 2 v v†) = Q - 2 (Q v) v†.
        for r in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for c in k + 1..n {
                acc += q[r * n + c] * v[c];
            }
            w[r] = acc;
        }
        for r in 0..n {
            let wr = w[r];
            for c in k + 1..n {
                q[r * n + c] -= wr * v[c].conj() * 2.0;
            }
        }
    }
    // Phase-rotate so the subdiagonal becomes real nonnegative.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut ph = vec![C64::new(1.0, 0.0); n];
    for i in 0..n {
        d[i] = a[i * n + i].re;
    }
    for i in 0..n - 1 {
        let t = a[(i + 1) * n + i];
        let mag = t.norm();
        e[i + 1] = mag;
        ph[i + 1] = if mag > 0.0 { ph[i] * (t / mag) } else { ph[i] };
    }
    for r in 0..n {
        for c in 0..n {
            q[r * n + c] *= ph[c];
        }
    }
    {
        let z = &mut q;
        tql2(&mut d, &mut e, n, |i, i1, s, c| {
            for k in 0..n {
                let f = z[k * n + i1];
                z[k * n + i1] = z[k * n + i] * s + f * c;
                z[k * n + i] = z[k * n + i] * c - f * s;
            }
        });
    }
    let order = sort_ascending(&d);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = vec![C64::new(0.0, 0.0); n * n];
    for (col, &src) in order.iter().enumerate() {
        eigenvalues.push(d[src]);
        for k in 0..n {
            eigenvectors[col * n + k] = q[k * n + src];
        }
    }
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// Largest singular value of a complex `rows × cols` matrix (row-major):
/// the square root of the top eigenvalue of M†M.
pub fn largest_singular_value(m: &[C64], rows: usize, cols: usize) -> f64 {
    assert_eq!(m.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let mut gram = vec![C64::new(0.0, 0.0); cols * cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..rows {
                acc += m[r * cols + i].conj() * m[r * cols + j];
            }
            gram[i * cols + j] = acc;
        }
    }
    let eig = hermitian_eigen(gram, cols);
    math::sqrt(eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0))
}
