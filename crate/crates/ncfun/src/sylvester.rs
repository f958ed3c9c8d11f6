//! Sylvester equation machinery: solve `AH - HB = C`, decide solvability by
//! spectral disjointness, and detect kernels of the Sylvester operator.
//!
//! The operator `H -> AH - HB` on n-by-m matrices is singular exactly when
//! the spectra of `A` and `B` intersect; numerically the dichotomy blurs, so
//! spectral gaps inside an ambiguity band are reported as indeterminate
//! rather than forced to a boolean.

use crate::error::{Error, Result};
use crate::linalg;
use crate::{CMat, C64};

/// Spectral gaps below this are treated as a shared eigenvalue.
pub const GAP_SHARED_BELOW: f64 = 1e-8;
/// Spectral gaps above this are treated as genuinely disjoint; the band in
/// between is numerically indeterminate.
pub const GAP_DISJOINT_ABOVE: f64 = 1e-4;

/// Minimum over eigenvalue pairs of `|lambda_A - lambda_B|`, together with an
/// achieving pair.
pub fn spectral_gap(a: &CMat, b: &CMat) -> (f64, C64, C64) {
    let eig_a = linalg::eigenvalues(a);
    let eig_b = linalg::eigenvalues(b);
    let mut best = (f64::INFINITY, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for &la in &eig_a {
        for &lb in &eig_b {
            let gap = (la - lb).norm();
            if gap < best.0 {
                best = (gap, la, lb);
            }
        }
    }
    best
}

/// True iff every eigenvalue pair is separated by more than `gap`.
pub fn spectra_disjoint(a: &CMat, b: &CMat, gap: f64) -> bool {
    spectral_gap(a, b).0 > gap
}

/// Three-valued disjointness verdict with the ambiguity band applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisjointnessVerdict {
    Disjoint,
    Shared,
    Indeterminate,
}

pub fn disjointness_verdict(a: &CMat, b: &CMat) -> DisjointnessVerdict {
    let (gap, _, _) = spectral_gap(a, b);
    if gap > GAP_DISJOINT_ABOVE {
        DisjointnessVerdict::Disjoint
    } else if gap < GAP_SHARED_BELOW {
        DisjointnessVerdict::Shared
    } else {
        DisjointnessVerdict::Indeterminate
    }
}

/// The flattened Sylvester operator `I_m (x) A - B^T (x) I_n` acting on
/// column-stacked n-by-m matrices.
pub fn sylvester_operator(a: &CMat, b: &CMat) -> CMat {
    let n = a.nrows();
    let m = b.nrows();
    CMat::identity(m, m).kronecker(a) - b.transpose().kronecker(&CMat::identity(n, n))
}

fn check_square(m: &CMat, context: &'static str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            context,
            expected: "square matrix".into(),
            got: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    Ok(())
}

fn check_shapes(a: &CMat, b: &CMat, c: &CMat) -> Result<()> {
    check_square(a, "sylvester A")?;
    check_square(b, "sylvester B")?;
    if c.nrows() != a.nrows() || c.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch {
            context: "sylvester right-hand side",
            expected: format!("{}x{}", a.nrows(), b.nrows()),
            got: format!("{}x{}", c.nrows(), c.ncols()),
        });
    }
    Ok(())
}

fn gap_guard(a: &CMat, b: &CMat) -> Result<()> {
    let (gap, la, lb) = spectral_gap(a, b);
    if gap <= GAP_SHARED_BELOW {
        return Err(Error::SpectralGapBelowThreshold {
            gap,
            threshold: GAP_SHARED_BELOW,
            lambda_a: la,
            lambda_b: lb,
        });
    }
    Ok(())
}

/// Solve `AH - HB = C` by the dense Kronecker-vectorized linear system.
pub fn solve_sylvester_dense(a: &CMat, b: &CMat, c: &CMat) -> Result<CMat> {
    check_shapes(a, b, c)?;
    gap_guard(a, b)?;
    let op = sylvester_operator(a, b);
    let h = linalg::solve(&op, &linalg::vectorize(c))?;
    Ok(linalg::unvectorize(&h, a.nrows(), b.nrows()))
}

/// Solve `AH - HB = C` by diagonalizing both coefficients: with
/// `A = V_A D_A V_A^{-1}` and `B = V_B D_B V_B^{-1}`, the transformed unknown
/// has entries `C'_{ij} / (alpha_i - beta_j)`. Requires both eigenvector
/// matrices to be well conditioned (< 1e6).
pub fn solve_sylvester_eig(a: &CMat, b: &CMat, c: &CMat) -> Result<CMat> {
    check_shapes(a, b, c)?;
    gap_guard(a, b)?;
    const EIGVEC_COND_LIMIT: f64 = 1e6;
    let (alpha, va) = linalg::eigen_decomposition(a)?;
    let (beta, vb) = linalg::eigen_decomposition(b)?;
    for v in [&va, &vb] {
        let cond = linalg::condition_number(v);
        if !cond.is_finite() || cond >= EIGVEC_COND_LIMIT {
            return Err(Error::IllConditioned {
                what: "eigenvector matrix",
                cond,
                limit: EIGVEC_COND_LIMIT,
            });
        }
    }
    let c_hat = linalg::solve(&va, &(c * &vb))?;
    let mut h_hat = CMat::zeros(c.nrows(), c.ncols());
    for i in 0..c.nrows() {
        for j in 0..c.ncols() {
            h_hat[(i, j)] = c_hat[(i, j)] / (alpha[i] - beta[j]);
        }
    }
    let vb_inv = linalg::inverse(&vb)?;
    Ok(&va * h_hat * vb_inv)
}

/// Solve `AH - HB = C`, choosing the dense Kronecker solve at desk scale and
/// falling back to the eigendecomposition solve for larger problems.
pub fn solve_sylvester(a: &CMat, b: &CMat, c: &CMat) -> Result<CMat> {
    check_shapes(a, b, c)?;
    if a.nrows() * b.nrows() <= 4096 {
        solve_sylvester_dense(a, b, c)
    } else {
        solve_sylvester_eig(a, b, c)
    }
}

/// Smallest singular value of the Sylvester operator and the matrix `H`
/// (unit Frobenius norm) obtained by reshaping the corresponding right
/// singular vector — the best candidate for a kernel element.
pub fn sylvester_kernel_candidate(a: &CMat, b: &CMat) -> Result<(f64, CMat)> {
    check_square(a, "sylvester A")?;
    check_square(b, "sylvester B")?;
    let op = sylvester_operator(a, b);
    let svd = op.svd(true, true);
    let (idx, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(y.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, &s)| (i, s))
        .expect("nonempty singular values");
    let v_t = svd.v_t.expect("right singular vectors requested");
    // Right singular vector for the smallest singular value, as a column.
    let v_col = CMat::from_fn(v_t.ncols(), 1, |i, _| v_t[(idx, i)].conj());
    let h = linalg::unvectorize(&v_col, a.nrows(), b.nrows());
    Ok((smin, h))
}

/// True iff the Sylvester operator has a numerical kernel: its smallest
/// singular value is at most `tol`. By the spectral characterization this
/// agrees with NOT `spectra_disjoint` up to numerical tolerance.
pub fn sylvester_kernel_exists(a: &CMat, b: &CMat, tol: f64) -> Result<bool> {
    let (smin, _) = sylvester_kernel_candidate(a, b)?;
    Ok(smin <= tol)
}
