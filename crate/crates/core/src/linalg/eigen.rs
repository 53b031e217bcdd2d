use crate::error::{Error, Result};

use super::dense::DenseMatrix;
use super::envelope::EnvelopeCholesky;
use super::sparse::SparseMatrix;

/// Relative asymmetry tolerated before a matrix is rejected as non-symmetric.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let n = a.rows();
    let mut m = a.clone();
    // symmetrize exactly so rotations stay consistent
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let total: f64 = m.as_slice().iter().map(|v| v * v).sum();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    eig.sort_by(|a, b| a.total_cmp(b));
    Ok(eig)
}

/// Spectral condition number `λ_max / λ_min` of a dense SPD matrix.
pub fn condition_number_spd(a: &DenseMatrix) -> Result<f64> {
    let eig = symmetric_eigenvalues(a)?;
    let (lo, hi) = (eig[0], eig[eig.len() - 1]);
    if lo <= 0.0 {
        return Err(Error::NotPositiveDefinite(lo));
    }
    Ok(hi / lo)
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e` by Sturm-sequence bisection.
fn tridiagonal_max_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    // number of eigenvalues strictly below x
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..n {
            let off = if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 };
            q = d[i] - x - if i > 0 { off / q } else { 0.0 };
            if q == 0.0 {
                q = f64::EPSILON * (x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest eigenvalue of a symmetric linear operator by Lanczos iteration
/// with full reorthogonalization.
fn lanczos_max_eigenvalue(n: usize, apply: &dyn Fn(&[f64]) -> Vec<f64>, rel_tol: f64) -> f64 {
    let max_steps = n.min(400);
    // deterministic, non-degenerate start vector
    let mut q: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.7548776662466927).sin()).collect();
    normalize(&mut q);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut previous = f64::NAN;
    for step in 0..max_steps {
        let mut w = apply(&basis[step]);
        let a = dot(&w, &basis[step]);
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(&w, v);
                axpy(-c, v, &mut w);
            }
        }
        let estimate = tridiagonal_max_eigenvalue(&alpha, &beta);
        if (estimate - previous).abs() <= rel_tol * estimate.abs() && step >= 4 {
            return estimate;
        }
        previous = estimate;
        let b = norm(&w);
        if b <= 1e-14 * estimate.abs().max(f64::MIN_POSITIVE) {
            return estimate;
        }
        beta.push(b);
        w.iter_mut().for_each(|v| *v /= b);
        basis.push(w);
    }
    previous
}

/// Extreme eigenvalues `(λ_min, λ_max)` of a sparse SPD matrix.
///
/// `λ_max` comes from Lanczos on `A`; `λ_min` from Lanczos on `A⁻¹` applied
/// through an envelope Cholesky factorization.
pub fn spd_extreme_eigenvalues(a: &SparseMatrix, rel_tol: f64) -> Result<(f64, f64)> {
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let n = a.dim();
    let factor = EnvelopeCholesky::factor(a)?;
    let lmax = lanczos_max_eigenvalue(n, &|x| a.mul_vec(x), rel_tol);
    let inv_max = lanczos_max_eigenvalue(n, &|x| factor.solve(x), rel_tol);
    if inv_max <= 0.0 {
        return Err(Error::NotPositiveDefinite(inv_max));
    }
    Ok((1.0 / inv_max, lmax))
}

/// Spectral condition number of a sparse SPD matrix.
pub fn condition_number_spd_sparse(a: &SparseMatrix) -> Result<f64> {
    let (lo, hi) = spd_extreme_eigenvalues(a, 1e-10)?;
    Ok(hi / lo)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    a.iter_mut().for_each(|v| *v /= n);
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_condition_numbers() {
        assert!((condition_number_spd(&DenseMatrix::identity(5)).unwrap() - 1.0).abs() < 1e-14);
        let d = DenseMatrix::from_diagonal(&[1.0, 100.0]);
        assert!((condition_number_spd(&d).unwrap() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn errors_on_bad_input() {
        let ns = DenseMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]);
        assert!(matches!(condition_number_spd(&ns), Err(Error::NotSymmetric(_))));
        let indef = DenseMatrix::from_diagonal(&[1.0, -1.0]);
        assert!(matches!(condition_number_spd(&indef), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn jacobi_matches_two_by_two_closed_form() {
        let a = DenseMatrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]);
        let eig = symmetric_eigenvalues(&a).unwrap();
        let disc = (1.0f64 + 4.0).sqrt();
        assert!((eig[0] - (5.0 - disc) / 2.0).abs() < 1e-14);
        assert!((eig[1] - (5.0 + disc) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_bisection_on_laplacian() {
        // eigenvalues of tridiag(-1, 2, -1) are 2 - 2 cos(kπ/(n+1))
        let n = 12;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let expected = 2.0 - 2.0 * (n as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((tridiagonal_max_eigenvalue(&d, &e) - expected).abs() < 1e-12);
    }

    #[test]
    fn lanczos_agrees_with_jacobi() {
        let n = 30;
        let dense = DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0 + 0.1 * i as f64
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let sparse = SparseMatrix::from_dense(&dense, 0.0);
        let eig = symmetric_eigenvalues(&dense).unwrap();
        let (lo, hi) = spd_extreme_eigenvalues(&sparse, 1e-12).unwrap();
        assert!((lo - eig[0]).abs() < 1e-9 * eig[0]);
        assert!((hi - eig[n - 1]).abs() < 1e-9 * eig[n - 1]);
    }
}
