//! The Riccati-to-LMI pipeline: the quadratic matrix inequality residual, its
//! 2n-by-2n linear block form, positivity testing with an explicit margin,
//! and the Schur-complement equivalence of the two.
//!
//! Strictness: positivity is tested strictly against a margin; a smallest
//! eigenvalue within the margin of zero is indeterminate rather than a
//! boolean, since floating point cannot certify an open condition at its
//! boundary. No feasibility search is performed — candidates are checked,
//! not found.

use crate::error::{Error, Result};
use crate::linalg;
use crate::{CMat, C64};

const SELF_ADJOINT_TOL: f64 = 1e-12;

/// Data of the Riccati inequality `AX + XA* - X BB* X + C*C > 0`: the known
/// coefficients `A`, `B`, `C` and a self-adjoint candidate `X`.
#[derive(Debug, Clone)]
pub struct RiccatiData {
    a: CMat,
    b: CMat,
    c: CMat,
    x: CMat,
}

impl RiccatiData {
    /// All four matrices must be n-by-n and `X` self-adjoint within 1e-12.
    pub fn new(a: CMat, b: CMat, c: CMat, x: CMat) -> Result<Self> {
        let n = a.nrows();
        for (m, what) in [(&a, "A"), (&b, "B"), (&c, "C"), (&x, "X")] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    context: "riccati data",
                    expected: format!("{n}x{n}"),
                    got: format!("{}x{} for {}", m.nrows(), m.ncols(), what),
                });
            }
        }
        let defect = linalg::self_adjoint_defect(&x);
        if defect > SELF_ADJOINT_TOL {
            return Err(Error::NotSelfAdjoint {
                defect,
                tol: SELF_ADJOINT_TOL,
            });
        }
        Ok(RiccatiData { a, b, c, x })
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn c(&self) -> &CMat {
        &self.c
    }

    pub fn x(&self) -> &CMat {
        &self.x
    }

    pub fn level(&self) -> usize {
        self.a.nrows()
    }
}

/// Force exact self-adjointness: average each off-diagonal pair and zero the
/// imaginary part of the diagonal, so the result equals its adjoint entry for
/// entry with no tolerance.
fn symmetrize(m: &CMat) -> CMat {
    let n = m.nrows();
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * C64::new(0.5, 0.0);
            out[(i, j)] = avg;
            out[(j, i)] = avg.conj();
        }
    }
    out
}

/// The Riccati residual `AX + XA* - X BB* X + C*C`, symmetrized to suppress
/// roundoff asymmetry.
pub fn riccati_residual(data: &RiccatiData) -> CMat {
    let (a, b, c, x) = (&data.a, &data.b, &data.c, &data.x);
    let raw = a * x + x * &a.adjoint() - x * b * b.adjoint() * x + c.adjoint() * c;
    symmetrize(&raw)
}

/// The LMI block form `[[AX + XA* + C*C, XB], [B*X, I]]`; positive exactly
/// when the Riccati residual is, by the Schur complement against the identity
/// (2,2) block.
pub fn riccati_lmi_block(data: &RiccatiData) -> CMat {
    let n = data.level();
    let (a, b, c, x) = (&data.a, &data.b, &data.c, &data.x);
    let p = symmetrize(&(a * x + x * &a.adjoint() + c.adjoint() * c));
    let q = x * b;
    let mut out = CMat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(&p);
    out.view_mut((0, n), (n, n)).copy_from(&q);
    out.view_mut((n, 0), (n, n)).copy_from(&q.adjoint());
    out.view_mut((n, n), (n, n))
        .copy_from(&CMat::identity(n, n));
    out
}

/// Strict positivity: smallest eigenvalue above `margin`. The input must be
/// self-adjoint within 1e-10.
pub fn is_positive_definite(m: &CMat, margin: f64) -> Result<bool> {
    let tol = 1e-10 * linalg::op_norm(m).max(1.0);
    let defect = linalg::self_adjoint_defect(m);
    if defect > tol {
        return Err(Error::NotSelfAdjoint { defect, tol });
    }
    Ok(linalg::hermitian_min_eigenvalue(m) > margin)
}

/// Three-valued positivity: the margin band around zero is indeterminate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityVerdict {
    Positive,
    NotPositive,
    Indeterminate,
}

pub fn positivity_verdict(m: &CMat, margin: f64) -> Result<PositivityVerdict> {
    let tol = 1e-10 * linalg::op_norm(m).max(1.0);
    let defect = linalg::self_adjoint_defect(m);
    if defect > tol {
        return Err(Error::NotSelfAdjoint { defect, tol });
    }
    let min_eig = linalg::hermitian_min_eigenvalue(m);
    Ok(if min_eig > margin {
        PositivityVerdict::Positive
    } else if min_eig < -margin {
        PositivityVerdict::NotPositive
    } else {
        PositivityVerdict::Indeterminate
    })
}

/// Check that the Riccati residual and the LMI block form reach the same
/// positivity verdict at the given margin. Either verdict landing in the
/// indeterminate band makes the check pass vacuously; outside the band the
/// two verdicts must agree.
pub fn schur_equivalence_check(data: &RiccatiData, margin: f64) -> Result<bool> {
    let residual_verdict = positivity_verdict(&riccati_residual(data), margin)?;
    let block_verdict = positivity_verdict(&riccati_lmi_block(data), margin)?;
    Ok(residual_verdict == PositivityVerdict::Indeterminate
        || block_verdict == PositivityVerdict::Indeterminate
        || residual_verdict == block_verdict)
}

/// Leading principal minors `det M_k`, k = 1..n — the classical positivity
/// criterion. Emitted for demonstration only (for a 2n-by-2n block with
/// n = 3 these are six polynomials of degrees 1 through 6 in the entries of
/// X): decisions always go through eigenvalues instead.
pub fn leading_principal_minors(m: &CMat) -> Vec<C64> {
    (1..=m.nrows())
        .map(|k| m.view((0, 0), (k, k)).into_owned().determinant())
        .collect()
}
