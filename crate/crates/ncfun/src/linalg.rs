//! Dense complex linear-algebra helpers shared across modules: vectorization,
//! condition numbers, general eigendecomposition via the complex Schur form,
//! and Hermitian extreme eigenvalues.

use crate::error::{Error, Result};
use crate::{CMat, C64};

/// Column-stacking vectorization: the columns of `m` concatenated into a
/// single column. With this convention the matrix of `H -> A H B` is
/// `B^T (x) A`.
pub fn vectorize(m: &CMat) -> CMat {
    CMat::from_column_slice(m.nrows() * m.ncols(), 1, m.as_slice())
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &CMat, nrows: usize, ncols: usize) -> CMat {
    assert_eq!(v.nrows() * v.ncols(), nrows * ncols, "unvectorize size");
    CMat::from_column_slice(nrows, ncols, v.as_slice())
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let svd = m.clone().svd(false, false);
    svd.singular_values.max()
}

/// Ratio of extreme singular values; `f64::INFINITY` when numerically rank
/// deficient.
pub fn condition_number(m: &CMat) -> f64 {
    let svd = m.clone().svd(false, false);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigenvalues of a general complex square matrix (diagonal of the complex
/// Schur form), sorted by real part then imaginary part so that equal inputs
/// produce identical output.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    assert_eq!(m.nrows(), m.ncols(), "eigenvalues of non-square matrix");
    if m.nrows() == 0 {
        return Vec::new();
    }
    let vals = m
        .clone()
        .eigenvalues()
        .expect("QR eigenvalue iteration failed to converge");
    let mut out: Vec<C64> = vals.iter().copied().collect();
    out.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    out
}

/// Eigendecomposition of a general complex matrix via the complex Schur form:
/// returns `(values, v)` with `m * v ≈ v * diag(values)`. Eigenvectors come
/// from back substitution on the triangular factor; columns are normalized.
/// Intended for diagonalizable matrices — the caller is expected to guard on
/// `condition_number(&v)`.
pub fn eigen_decomposition(m: &CMat) -> Result<(Vec<C64>, CMat)> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigen_decomposition of non-square matrix");
    let schur = m.clone().schur();
    let (q, t) = schur.unpack();
    let scale = op_norm(&t).max(1.0);
    let smin = scale * (n as f64) * f64::EPSILON;
    let mut v = CMat::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![C64::new(0.0, 0.0); n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut rhs = C64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                rhs += t[(i, j)] * y[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smin {
                // Repeated diagonal entry: perturb the pivot the way LAPACK's
                // triangular eigenvector solvers do.
                denom = C64::new(smin, 0.0);
            }
            y[i] = -rhs / denom;
        }
        let mut col = CMat::zeros(n, 1);
        for i in 0..n {
            col[(i, 0)] = y[i];
        }
        let col = &q * col;
        let norm = col.norm();
        if norm == 0.0 {
            return Err(Error::Singular {
                what: "eigenvector computation",
            });
        }
        let col = col / C64::new(norm, 0.0);
        v.view_mut((0, k), (n, 1)).copy_from(&col);
    }
    let values = (0..n).map(|k| t[(k, k)]).collect();
    Ok((values, v))
}

/// Solve `a x = b` by LU with partial pivoting.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    a.clone().lu().solve(b).ok_or(Error::Singular {
        what: "linear solve",
    })
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    a.clone().try_inverse().ok_or(Error::Singular {
        what: "matrix inverse",
    })
}

/// Smallest eigenvalue of a Hermitian matrix. The input is symmetrized first
/// so callers may pass data polluted by roundoff.
pub fn hermitian_min_eigenvalue(m: &CMat) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    eig.eigenvalues.min()
}

/// Operator-norm defect `‖m − m*‖` from being self-adjoint.
pub fn self_adjoint_defect(m: &CMat) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    op_norm(&(m - m.adjoint()))
}
