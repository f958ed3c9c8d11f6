//! Finite-dimensional transfer-function realizations on polynomial
//! polyhedra: an isometric colligation `V = [[alpha, B], [C, D]]` mapping
//! `C ⊕ L^I -> C ⊕ L^J` with `dim L = m` finite, evaluated through
//!
//! ```text
//! f(x) = alpha I + B~ D(x) [I - D~ D(x)]^{-1} C~,     D(x) = delta(x) (x) I_m,
//! ```
//!
//! plus free-polynomial approximants obtained by truncating the Neumann
//! series of the resolvent.
//!
//! Tensor layout, fixed once: a vector in `K ⊗ L^S` (K the level-n evaluation
//! space, S the slot count) is indexed slot-major as `(slot, n-index,
//! m-index)`. `delta(x) (x) I_m` is then the blockwise Kronecker product of
//! the evaluated block matrix with `I_m`, and the lifted `B`, `C`, `D` act as
//! `I_n (x) block` on each slot block.

use crate::error::{Error, Result};
use crate::evaluator::{eval_poly_matrix, gdelta_norm, FreeFunction};
use crate::freealg::{NcPoly, PolyMatrix};
use crate::linalg;
use crate::mattuple::MatrixTuple;
use crate::{CMat, C64};

const RESOLVENT_COND_LIMIT: f64 = 1e12;

/// Realization data: the defining polynomial matrix `delta` (I-by-J), the
/// auxiliary dimension `m`, and the colligation blocks. `V` is
/// `(1 + mJ) x (1 + mI)` and is expected to be an isometry (`V*V = I` within
/// 1e-10); [`Realization::validate_isometry`] measures the defect.
#[derive(Debug, Clone)]
pub struct Realization {
    delta: PolyMatrix,
    aux_dim: usize,
    alpha: C64,
    b_row: CMat, // 1 x (m I)
    c_col: CMat, // (m J) x 1
    d_blk: CMat, // (m J) x (m I)
}

impl Realization {
    pub fn new(
        delta: PolyMatrix,
        aux_dim: usize,
        alpha: C64,
        b_row: CMat,
        c_col: CMat,
        d_blk: CMat,
    ) -> Result<Self> {
        if aux_dim == 0 {
            return Err(Error::InvalidArgument {
                arg: "aux_dim",
                reason: "auxiliary dimension must be positive".into(),
            });
        }
        let mi = aux_dim * delta.rows();
        let mj = aux_dim * delta.cols();
        let checks = [
            ("B block", b_row.nrows(), b_row.ncols(), 1, mi),
            ("C block", c_col.nrows(), c_col.ncols(), mj, 1),
            ("D block", d_blk.nrows(), d_blk.ncols(), mj, mi),
        ];
        for (what, rows, cols, want_rows, want_cols) in checks {
            if rows != want_rows || cols != want_cols {
                return Err(Error::DimensionMismatch {
                    context: "realization block",
                    expected: format!("{want_rows}x{want_cols} for {what}"),
                    got: format!("{rows}x{cols}"),
                });
            }
        }
        Ok(Realization {
            delta,
            aux_dim,
            alpha,
            b_row,
            c_col,
            d_blk,
        })
    }

    pub fn delta(&self) -> &PolyMatrix {
        &self.delta
    }

    pub fn aux_dim(&self) -> usize {
        self.aux_dim
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn b_row(&self) -> &CMat {
        &self.b_row
    }

    pub fn c_col(&self) -> &CMat {
        &self.c_col
    }

    pub fn d_block(&self) -> &CMat {
        &self.d_blk
    }

    pub fn num_vars(&self) -> usize {
        self.delta.num_vars()
    }

    /// The assembled colligation `V = [[alpha, B], [C, D]]`.
    pub fn isometry_matrix(&self) -> CMat {
        let mi = self.aux_dim * self.delta.rows();
        let mj = self.aux_dim * self.delta.cols();
        let mut v = CMat::zeros(1 + mj, 1 + mi);
        v[(0, 0)] = self.alpha;
        v.view_mut((0, 1), (1, mi)).copy_from(&self.b_row);
        v.view_mut((1, 0), (mj, 1)).copy_from(&self.c_col);
        v.view_mut((1, 1), (mj, mi)).copy_from(&self.d_blk);
        v
    }

    /// Operator-norm defect `‖V*V - I‖`; at most 1e-10 for valid data.
    pub fn validate_isometry(&self) -> f64 {
        let v = self.isometry_matrix();
        let gram = v.adjoint() * &v;
        let dim = gram.nrows();
        linalg::op_norm(&(gram - CMat::identity(dim, dim)))
    }

    /// `delta(x) (x) I_m` in the slot-major layout.
    fn lifted_delta(&self, x: &MatrixTuple) -> Result<CMat> {
        let block = eval_poly_matrix(&self.delta, x)?;
        Ok(block.kronecker(&CMat::identity(self.aux_dim, self.aux_dim)))
    }

    /// Lift a `(m S') x (m S)` slot-block matrix to `K (x) L`-space: each
    /// m-by-m slot block `M_{s't}` becomes `I_n (x) M_{s't}`.
    fn lift_block(&self, m: &CMat, slot_rows: usize, slot_cols: usize, n: usize) -> CMat {
        let mdim = self.aux_dim;
        let eye = CMat::identity(n, n);
        let mut out = CMat::zeros(slot_rows * n * mdim, slot_cols * n * mdim);
        for sr in 0..slot_rows {
            for sc in 0..slot_cols {
                let blk = m.view((sr * mdim, sc * mdim), (mdim, mdim)).into_owned();
                let lifted = eye.kronecker(&blk);
                out.view_mut((sr * n * mdim, sc * n * mdim), (n * mdim, n * mdim))
                    .copy_from(&lifted);
            }
        }
        out
    }

    /// Lift the row `B` to a `n x (I n m)` map and the column `C` to a
    /// `(J n m) x n` map.
    fn lifted_b(&self, n: usize) -> CMat {
        let mdim = self.aux_dim;
        let slots = self.delta.rows();
        let eye = CMat::identity(n, n);
        let mut out = CMat::zeros(n, slots * n * mdim);
        for s in 0..slots {
            let blk = self.b_row.view((0, s * mdim), (1, mdim)).into_owned();
            out.view_mut((0, s * n * mdim), (n, n * mdim))
                .copy_from(&eye.kronecker(&blk));
        }
        out
    }

    fn lifted_c(&self, n: usize) -> CMat {
        let mdim = self.aux_dim;
        let slots = self.delta.cols();
        let eye = CMat::identity(n, n);
        let mut out = CMat::zeros(slots * n * mdim, n);
        for s in 0..slots {
            let blk = self.c_col.view((s * mdim, 0), (mdim, 1)).into_owned();
            out.view_mut((s * n * mdim, 0), (n * mdim, n))
                .copy_from(&eye.kronecker(&blk));
        }
        out
    }

    /// Evaluate the realization at a tuple inside the polyhedron; membership
    /// (`‖delta(x)‖ < 1`) is required, which with `‖D‖ <= 1` guarantees the
    /// resolvent exists. A resolvent condition number above 1e12 is reported
    /// as an error rather than silently inverted.
    pub fn eval(&self, x: &MatrixTuple) -> Result<CMat> {
        let norm = gdelta_norm(&self.delta, x)?;
        if !(norm < 1.0) {
            return Err(Error::OutsideDomain { norm });
        }
        let n = x.level();
        let lifted = self.lifted_delta(x)?;
        let d_lift = self.lift_block(&self.d_blk, self.delta.cols(), self.delta.rows(), n);
        let jdim = self.delta.cols() * n * self.aux_dim;
        let resolvent_arg = CMat::identity(jdim, jdim) - &d_lift * &lifted;
        let cond = linalg::condition_number(&resolvent_arg);
        if !cond.is_finite() || cond > RESOLVENT_COND_LIMIT {
            return Err(Error::IllConditioned {
                what: "resolvent",
                cond,
                limit: RESOLVENT_COND_LIMIT,
            });
        }
        let solved = linalg::solve(&resolvent_arg, &self.lifted_c(n))?;
        let value = self.lifted_b(n) * &lifted * solved;
        Ok(CMat::identity(n, n) * self.alpha + value)
    }

    /// Degree-capped free-polynomial approximant: the symbolic expansion
    ///
    /// ```text
    /// alpha + sum_{k=0}^{N-1} B (delta_L) (D delta_L)^k C,
    /// ```
    ///
    /// with `delta_L = delta (x) I_m` over polynomial entries and the blocks
    /// numeric. `N = 0` returns the constant `alpha`. The result has degree
    /// at most `N * deg(delta)`.
    pub fn neumann_truncate(&self, order: usize) -> NcPoly {
        let d = self.num_vars();
        let delta_l = self.delta.kron_identity(self.aux_dim);
        let b_pm = PolyMatrix::from_numeric(&self.b_row, d);
        let c_pm = PolyMatrix::from_numeric(&self.c_col, d);
        let d_pm = PolyMatrix::from_numeric(&self.d_blk, d);

        let mut acc = NcPoly::constant(d, self.alpha);
        if order == 0 {
            return acc;
        }
        // front = B delta_L (D delta_L)^k, accumulated left to right.
        let mut front = b_pm.matmul(&delta_l).expect("shapes fixed by constructor");
        let hop = d_pm.matmul(&delta_l).expect("shapes fixed by constructor");
        for k in 0..order {
            let term = front.matmul(&c_pm).expect("shapes fixed by constructor");
            acc = acc.add(term.entry(0, 0)).expect("same variable count");
            if k + 1 < order {
                front = front.matmul(&hop).expect("shapes fixed by constructor");
            }
        }
        acc
    }

    /// Numeric value of the degree-N truncation at `x`: the partial sum
    /// `alpha I + sum_{k<N} B~ D(x) (D~ D(x))^k C~`. Algebraically identical
    /// to evaluating [`Realization::neumann_truncate`] at `x`, but costs
    /// matrix products instead of an exponential symbolic expansion.
    pub fn neumann_partial_sum(&self, x: &MatrixTuple, order: usize) -> Result<CMat> {
        let n = x.level();
        let alpha_term = CMat::identity(n, n) * self.alpha;
        if order == 0 {
            return Ok(alpha_term);
        }
        let lifted = self.lifted_delta(x)?;
        let d_lift = self.lift_block(&self.d_blk, self.delta.cols(), self.delta.rows(), n);
        let hop = &d_lift * &lifted;
        let c_lift = self.lifted_c(n);
        let mut power = c_lift.clone(); // (D~ D(x))^k C~
        let mut sum = c_lift;
        for _ in 1..order {
            power = &hop * power;
            sum += &power;
        }
        Ok(alpha_term + self.lifted_b(n) * &lifted * sum)
    }
}

impl FreeFunction for Realization {
    fn eval_on(&self, x: &MatrixTuple) -> Result<CMat> {
        self.eval(x)
    }
}

/// One row of a truncation-error sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub order: usize,
    pub max_error: f64,
}

/// For each truncation order `N <= max_order`, the largest deviation over the
/// samples between the full realization value and the degree-N partial sum.
/// Every sample must lie in the scaled polyhedron (`‖t delta(x)‖ < 1`), which
/// makes the error decay at least geometrically in `N` at rate `1/t`.
pub fn approx_error_sweep(
    r: &Realization,
    t: f64,
    samples: &[MatrixTuple],
    max_order: usize,
) -> Result<Vec<SweepRow>> {
    if !(t > 1.0) {
        return Err(Error::InvalidArgument {
            arg: "t",
            reason: format!("sweep scale must exceed 1, got {t}"),
        });
    }
    for sample in samples {
        let norm = gdelta_norm(r.delta(), sample)? * t;
        if !(norm < 1.0) {
            return Err(Error::OutsideDomain { norm });
        }
    }
    let full: Vec<CMat> = samples.iter().map(|s| r.eval(s)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(max_order + 1);
    for order in 0..=max_order {
        let mut max_error: f64 = 0.0;
        for (sample, value) in samples.iter().zip(&full) {
            let approx = r.neumann_partial_sum(sample, order)?;
            max_error = max_error.max(linalg::op_norm(&(value - approx)));
        }
        rows.push(SweepRow { order, max_error });
    }
    Ok(rows)
}
