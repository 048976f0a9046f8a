//! Dense and structured linear algebra kernels sized for this crate's needs:
//! symmetric tridiagonal eigenvalues, Householder reduction, log-determinants.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (length `d.len() - 1`), via implicit QL with Wilkinson
/// shifts. Returned in ascending order.
pub fn tridiagonal_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::Argument("empty tridiagonal matrix"));
    }
    if offdiag.len() + 1 != n {
        return Err(Error::Argument("off-diagonal length must be n - 1"));
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(offdiag);

    let max_sweeps = 30 * n;
    let mut sweeps = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = math::abs(d[m]) + math::abs(d[m + 1]);
                if math::abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > max_sweeps {
                return Err(Error::NoConvergence("tridiagonal QL"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::sqrt(g * g + 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = math::sqrt(f * f + g * g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Householder reduction of a dense real symmetric matrix (row-major, `n x n`)
/// to tridiagonal form. Returns `(diag, offdiag)`.
pub fn householder_tridiagonalize(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = math::sqrt((k + 1..n).map(|i| a[i * n + k] * a[i * n + k]).sum());
        if norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm = math::sqrt((k + 1..n).map(|i| v[i] * v[i]).sum());
        if vnorm == 0.0 {
            off[k] = x0;
            continue;
        }
        for vi in v.iter_mut().take(n).skip(k + 1) {
            *vi /= vnorm;
        }
        // p = A v on the trailing block
        for i in k + 1..n {
            p[i] = (k + 1..n).map(|j| a[i * n + j] * v[j]).sum();
        }
        let vp: f64 = (k + 1..n).map(|i| v[i] * p[i]).sum();
        for i in k + 1..n {
            p[i] -= vp * v[i];
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] -= 2.0 * (v[i] * p[j] + p[i] * v[j]);
            }
        }
        off[k] = alpha;
        for i in k + 1..n {
            a[i * n + k] = 0.0;
            a[k * n + i] = 0.0;
        }
        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha;
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    (diag, off)
}

/// Eigenvalues of a dense real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let (d, e) = householder_tridiagonalize(a, n);
    tridiagonal_eigenvalues(&d, &e)
}

/// `log det` of a symmetric positive definite matrix via Cholesky.
/// Returns `None` if a pivot is not strictly positive.
pub fn cholesky_log_det(mut a: Vec<f64>, n: usize) -> Option<f64> {
    debug_assert_eq!(a.len(), n * n);
    let mut log_det = 0.0;
    for j in 0..n {
        let row_j = j * n;
        let mut pivot = a[row_j + j];
        for k in 0..j {
            pivot -= a[row_j + k] * a[row_j + k];
        }
        if !(pivot > 0.0) {
            return None;
        }
        let ljj = math::sqrt(pivot);
        a[row_j + j] = ljj;
        log_det += 2.0 * math::ln(ljj);
        for i in j + 1..n {
            let row_i = i * n;
            let mut s = a[row_i + j];
            let (li, lj) = (&a[row_i..row_i + j], &a[row_j..row_j + j]);
            s -= li.iter().zip(lj).map(|(x, y)| x * y).sum::<f64>();
            a[row_i + j] = s / ljj;
        }
    }
    Some(log_det)
}

/// `(sign, log|det|)` of a general square matrix via LU with partial pivoting.
pub fn lu_log_det(mut a: Vec<f64>, n: usize) -> (f64, f64) {
    debug_assert_eq!(a.len(), n * n);
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for k in 0..n {
        let (mut piv, mut best) = (k, math::abs(a[k * n + k]));
        for i in k + 1..n {
            let v = math::abs(a[i * n + k]);
            if v > best {
                piv = i;
                best = v;
            }
        }
        if best == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        if pivot < 0.0 {
            sign = -sign;
        }
        log_abs += math::ln(math::abs(pivot));
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k + 1..n {
                a[i * n + j] -= factor * a[k * n + j];
            }
        }
    }
    (sign, log_abs)
}

/// `log det` of the symmetric positive definite Toeplitz matrix with first
/// row `first_row`, by the Durbin recursion in O(n^2).
/// Returns `None` when the matrix is not numerically positive definite.
pub fn toeplitz_log_det_durbin(first_row: &[f64]) -> Option<f64> {
    let n = first_row.len();
    if n == 0 {
        return Some(0.0);
    }
    let t0 = first_row[0];
    if !(t0 > 0.0) {
        return None;
    }
    let r: Vec<f64> = first_row[1..].iter().map(|v| v / t0).collect();
    let mut log_det = n as f64 * math::ln(t0);
    if n == 1 {
        return Some(log_det);
    }
    let mut y = Vec::with_capacity(n);
    let mut z = vec![0.0; n];
    y.push(-r[0]);
    let mut alpha = -r[0];
    // log of det(T_{k+1}) / det(T_k)
    let mut log_beta = 0.0;
    for k in 1..n {
        if !(alpha.abs() < 1.0) {
            return None;
        }
        log_beta += math::ln_1p(-alpha * alpha);
        log_det += log_beta;
        if k == n - 1 {
            break;
        }
        let beta = math::exp(log_beta);
        let dot: f64 = (0..k).map(|i| r[k - 1 - i] * y[i]).sum();
        alpha = -(r[k] + dot) / beta;
        for i in 0..k {
            z[i] = y[i] + alpha * y[k - 1 - i];
        }
        y[..k].copy_from_slice(&z[..k]);
        y.push(alpha);
    }
    Some(log_det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn tridiagonal_small_cases() {
        assert_eq!(tridiagonal_eigenvalues(&[2.0], &[]).unwrap(), vec![2.0]);
        let ev = tridiagonal_eigenvalues(&[0.0, 0.0], &[1.0]).unwrap();
        assert!(close(ev[0], -1.0, 1e-15) && close(ev[1], 1.0, 1e-15));
        let ev = tridiagonal_eigenvalues(&[0.0; 3], &[1.0, 1.0]).unwrap();
        let s2 = 2f64.sqrt();
        assert!(close(ev[0], -s2, 1e-14) && close(ev[1], 0.0, 1e-14) && close(ev[2], s2, 1e-14));
    }

    #[test]
    fn tridiagonal_rejects_bad_lengths() {
        assert!(tridiagonal_eigenvalues(&[], &[]).is_err());
        assert!(tridiagonal_eigenvalues(&[1.0, 2.0], &[]).is_err());
    }

    #[test]
    fn toeplitz_laplacian_spectrum() {
        // tridiag(-1, 2, -1) has eigenvalues 2 - 2 cos(k pi / (n + 1))
        let n = 40;
        let ev = tridiagonal_eigenvalues(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * (((k + 1) as f64) * core::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!(close(*v, want, 1e-13), "{k}: {v} vs {want}");
        }
    }

    #[test]
    fn householder_preserves_spectrum() {
        let n = 5;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = 1.0 / (1.0 + i as f64 + j as f64) + if i == j { 1.0 } else { 0.0 };
            }
        }
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        let frob: f64 = a.iter().map(|v| v * v).sum();
        let ev = symmetric_eigenvalues(a, n).unwrap();
        assert!(close(ev.iter().sum::<f64>(), trace, 1e-13));
        assert!(close(ev.iter().map(|v| v * v).sum::<f64>(), frob, 1e-12));
    }

    #[test]
    fn determinants_agree() {
        let n = 6;
        let row: Vec<f64> = (0..n).map(|k| 1.0 / (1.0 + k as f64 * k as f64)).collect();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = row[i.abs_diff(j)];
            }
        }
        let ch = cholesky_log_det(a.clone(), n).unwrap();
        let (s, lu) = lu_log_det(a, n);
        let du = toeplitz_log_det_durbin(&row).unwrap();
        assert_eq!(s, 1.0);
        assert!(close(ch, lu, 1e-12) && close(ch, du, 1e-12), "{ch} {lu} {du}");
    }

    #[test]
    fn lu_sign_of_permutation() {
        let a = vec![0.0, 1.0, 1.0, 0.0];
        let (s, l) = lu_log_det(a, 2);
        assert_eq!(s, -1.0);
        assert!(close(l, 0.0, 1e-15));
    }
}
