//! Graded evaluation of free polynomials and polynomial matrices on matrix
//! tuples, the block-triangular derivative mechanism, flattened derivative
//! operators, and the intertwining check.
//!
//! Vectorization convention, used everywhere: column stacking, so the matrix
//! of `H -> A H B` is `B^T (x) A`.

use crate::error::{Error, Result};
use crate::freealg::{NcPoly, PolyMatrix};
use crate::linalg;
use crate::mattuple::MatrixTuple;
use crate::{CMat, C64};

/// Evaluate a free polynomial on a tuple: each word becomes the ordered
/// product of the coordinate matrices (the empty word is the identity), scaled
/// by its coefficient and summed. The constant term contributes `c * I_n`.
pub fn eval_poly(p: &NcPoly, x: &MatrixTuple) -> Result<CMat> {
    if p.num_vars() != x.len() {
        return Err(Error::NumVarsMismatch {
            left: p.num_vars(),
            right: x.len(),
        });
    }
    let n = x.level();
    let mut acc = CMat::zeros(n, n);
    for (word, &coeff) in p.terms() {
        let mut prod = CMat::identity(n, n);
        for &letter in word.letters() {
            prod *= x.matrix(letter - 1);
        }
        acc += prod * coeff;
    }
    Ok(acc)
}

/// Evaluate an I-by-J matrix of polynomials blockwise: the result is the
/// (I*n)-by-(J*n) matrix whose (i, j) block is `eval_poly(delta[i][j], x)`.
pub fn eval_poly_matrix(delta: &PolyMatrix, x: &MatrixTuple) -> Result<CMat> {
    let n = x.level();
    let mut out = CMat::zeros(delta.rows() * n, delta.cols() * n);
    for i in 0..delta.rows() {
        for j in 0..delta.cols() {
            let block = eval_poly(delta.entry(i, j), x)?;
            out.view_mut((i * n, j * n), (n, n)).copy_from(&block);
        }
    }
    Ok(out)
}

/// Membership in the scaled polynomial polyhedron: `‖t * delta(x)‖ < 1`.
/// The scale must satisfy `t >= 1` (t = 1 is the polyhedron itself).
pub fn gdelta_contains(delta: &PolyMatrix, x: &MatrixTuple, t: f64) -> Result<bool> {
    if !(t >= 1.0) {
        return Err(Error::InvalidArgument {
            arg: "t",
            reason: format!("scale must be >= 1, got {t}"),
        });
    }
    Ok(gdelta_norm(delta, x)? * t < 1.0)
}

/// `‖delta(x)‖`, the quantity the membership test compares against `1/t`.
pub fn gdelta_norm(delta: &PolyMatrix, x: &MatrixTuple) -> Result<f64> {
    Ok(linalg::op_norm(&eval_poly_matrix(delta, x)?))
}

/// Full directional derivative `Dp(x)[h]` via the block-triangular trick:
/// evaluate `p` at the level-2n tuple with coordinates `[[x_i, h_i], [0, x_i]]`
/// and return the (1, 2) block.
pub fn block_derivative(p: &NcPoly, x: &MatrixTuple, h: &MatrixTuple) -> Result<CMat> {
    if x.len() != h.len() {
        return Err(Error::NumVarsMismatch {
            left: x.len(),
            right: h.len(),
        });
    }
    if x.level() != h.level() {
        return Err(Error::DimensionMismatch {
            context: "derivative direction",
            expected: format!("level {}", x.level()),
            got: format!("level {}", h.level()),
        });
    }
    let n = x.level();
    let blocks = x
        .matrices()
        .iter()
        .zip(h.matrices())
        .map(|(xi, hi)| {
            let mut b = CMat::zeros(2 * n, 2 * n);
            b.view_mut((0, 0), (n, n)).copy_from(xi);
            b.view_mut((0, n), (n, n)).copy_from(hi);
            b.view_mut((n, n), (n, n)).copy_from(xi);
            b
        })
        .collect();
    let block_tuple = MatrixTuple::new(blocks)?;
    let value = eval_poly(p, &block_tuple)?;
    Ok(value.view((0, n), (n, n)).into_owned())
}

/// Directional derivative evaluated through the symbolic Leibniz rule: for
/// each variable, differentiate symbolically with a fresh placeholder letter
/// and evaluate with the matching coordinate of `h` substituted for it.
pub fn symbolic_derivative_eval(p: &NcPoly, x: &MatrixTuple, h: &MatrixTuple) -> Result<CMat> {
    if x.len() != h.len() {
        return Err(Error::NumVarsMismatch {
            left: x.len(),
            right: h.len(),
        });
    }
    if x.level() != h.level() {
        return Err(Error::DimensionMismatch {
            context: "derivative direction",
            expected: format!("level {}", x.level()),
            got: format!("level {}", h.level()),
        });
    }
    let d = p.num_vars();
    let n = x.level();
    let mut acc = CMat::zeros(n, n);
    for var in 1..=d {
        let derived = p.directional_derivative(var, d + 1)?;
        if derived.is_zero() {
            continue;
        }
        let mut coords: Vec<CMat> = x.matrices().to_vec();
        coords.push(h.matrix(var - 1).clone());
        let extended = MatrixTuple::new(coords)?;
        acc += eval_poly(&derived, &extended)?;
    }
    Ok(acc)
}

/// Directional derivative by evaluation at scaled roots of unity in the step
/// parameter. For a polynomial, `g(lambda) = p(x + lambda h)` is itself a
/// polynomial of degree at most `deg p`, so sampling at `m >= deg p` roots of
/// unity recovers `g'(0)` without truncation error:
///
/// ```text
/// Dp(x)[h] = (1 / (m eps)) sum_k conj(w^k) g(eps w^k),   w = exp(2 pi i / m).
/// ```
pub fn complex_step_derivative(p: &NcPoly, x: &MatrixTuple, h: &MatrixTuple) -> Result<CMat> {
    if x.len() != h.len() {
        return Err(Error::NumVarsMismatch {
            left: x.len(),
            right: h.len(),
        });
    }
    let n = x.level();
    let deg = p.degree();
    if deg <= 0 {
        return Ok(CMat::zeros(n, n));
    }
    let m = (deg as usize).max(2);
    let eps = 0.5 / (1.0 + h.max_coord_norm());
    let mut acc = CMat::zeros(n, n);
    for k in 0..m {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (m as f64);
        let omega = C64::new(theta.cos(), theta.sin());
        let lambda = omega * C64::new(eps, 0.0);
        let coords: Vec<CMat> = x
            .matrices()
            .iter()
            .zip(h.matrices())
            .map(|(xi, hi)| xi + hi * lambda)
            .collect();
        let shifted = MatrixTuple::new(coords)?;
        acc += eval_poly(p, &shifted)? * omega.conj();
    }
    Ok(acc / C64::new(m as f64 * eps, 0.0))
}

/// A flattened linear map acting on column-stacked (tuples of) n-by-n
/// directions.
#[derive(Debug, Clone)]
pub struct LinearMapMatrix {
    source_dim: usize,
    target_dim: usize,
    matrix: CMat,
}

impl LinearMapMatrix {
    pub fn new(matrix: CMat) -> Self {
        LinearMapMatrix {
            source_dim: matrix.ncols(),
            target_dim: matrix.nrows(),
            matrix,
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Apply to a stacked source vector (a `source_dim`-by-1 column).
    pub fn apply(&self, v: &CMat) -> Result<CMat> {
        if v.nrows() != self.source_dim || v.ncols() != 1 {
            return Err(Error::DimensionMismatch {
                context: "linear map argument",
                expected: format!("{}x1", self.source_dim),
                got: format!("{}x{}", v.nrows(), v.ncols()),
            });
        }
        Ok(&self.matrix * v)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let svd = self.matrix.clone().svd(false, false);
        let mut out: Vec<f64> = svd.singular_values.iter().copied().collect();
        out.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        out
    }

    pub fn smallest_singular_value(&self) -> f64 {
        self.singular_values().last().copied().unwrap_or(0.0)
    }

    /// Numerical rank: singular values above `rel_tol` times the largest.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let sv = self.singular_values();
        let top = sv.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * top).count()
    }

    pub fn condition_number(&self) -> f64 {
        let sv = self.singular_values();
        match (sv.first(), sv.last()) {
            (Some(&max), Some(&min)) if min > 0.0 => max / min,
            _ => f64::INFINITY,
        }
    }
}

/// Matrix of the partial derivative map restricted to directions supported on
/// `vars` (1-based, nonempty, no repeats): columns are `vec(Dp(x)[e])` for
/// elementary directions `e` running over each selected variable slot in the
/// given order, with column-stacked inner ordering. The source dimension is
/// `|vars| * n^2`, the target `n^2`.
pub fn derivative_operator(p: &NcPoly, x: &MatrixTuple, vars: &[usize]) -> Result<LinearMapMatrix> {
    let d = p.num_vars();
    if vars.is_empty() {
        return Err(Error::InvalidArgument {
            arg: "vars",
            reason: "at least one variable must be selected".into(),
        });
    }
    let mut seen = vec![false; d];
    for &v in vars {
        if v == 0 || v > d {
            return Err(Error::VarOutOfRange {
                var: v,
                num_vars: d,
            });
        }
        if seen[v - 1] {
            return Err(Error::InvalidArgument {
                arg: "vars",
                reason: format!("variable x{v} selected twice"),
            });
        }
        seen[v - 1] = true;
    }
    let n = x.level();
    let nn = n * n;
    let mut matrix = CMat::zeros(nn, vars.len() * nn);
    for (slot, &var) in vars.iter().enumerate() {
        for src in 0..nn {
            // Column-stacked elementary direction: entry (src % n, src / n).
            let mut e = CMat::zeros(n, n);
            e[(src % n, src / n)] = C64::new(1.0, 0.0);
            let mut coords = vec![CMat::zeros(n, n); d];
            coords[var - 1] = e;
            let h = MatrixTuple::new(coords)?;
            let col = block_derivative(p, x, &h)?;
            matrix
                .view_mut((0, slot * nn + src), (nn, 1))
                .copy_from(&linalg::vectorize(&col));
        }
    }
    Ok(LinearMapMatrix::new(matrix))
}

/// A graded function that can be evaluated on matrix tuples; the common
/// interface of free polynomials and realization-formula functions.
pub trait FreeFunction {
    fn eval_on(&self, x: &MatrixTuple) -> Result<CMat>;

    /// Growth factor used to scale the intertwining tolerance: a bound on how
    /// much an input-side defect can be amplified by the function at argument
    /// scale `scale`.
    fn intertwining_amplification(&self, scale: f64) -> f64 {
        1.0 + scale
    }
}

impl FreeFunction for NcPoly {
    fn eval_on(&self, x: &MatrixTuple) -> Result<CMat> {
        eval_poly(self, x)
    }

    fn intertwining_amplification(&self, scale: f64) -> f64 {
        let deg = self.degree().max(0) as i32;
        1.0 + self.coeff_l1() * scale.max(1.0).powi(deg)
    }
}

/// Check the intertwining-preservation property: given `T x_i = y_i T` up to
/// `tol` coordinate-wise (a violated premise is an error), test whether
/// `‖T f(x) − f(y) T‖ <= tol * amplification`, where the amplification factor
/// comes from [`FreeFunction::intertwining_amplification`] at the scale
/// `max(‖x‖, ‖y‖, 1)`.
pub fn intertwining_check(
    f: &dyn FreeFunction,
    x: &MatrixTuple,
    y: &MatrixTuple,
    t_map: &CMat,
    tol: f64,
) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::NumVarsMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if t_map.ncols() != x.level() || t_map.nrows() != y.level() {
        return Err(Error::DimensionMismatch {
            context: "intertwiner",
            expected: format!("{}x{}", y.level(), x.level()),
            got: format!("{}x{}", t_map.nrows(), t_map.ncols()),
        });
    }
    let premise_defect = x
        .matrices()
        .iter()
        .zip(y.matrices())
        .map(|(xi, yi)| linalg::op_norm(&(t_map * xi - yi * t_map)))
        .fold(0.0, f64::max);
    if premise_defect > tol {
        return Err(Error::IntertwinerDefect {
            defect: premise_defect,
            tol,
        });
    }
    let fx = f.eval_on(x)?;
    let fy = f.eval_on(y)?;
    let defect = linalg::op_norm(&(t_map * fx - fy * t_map));
    let scale = x.max_coord_norm().max(y.max_coord_norm()).max(1.0);
    Ok(defect <= tol * f.intertwining_amplification(scale))
}

/// Central-difference directional derivative for functions that are not
/// polynomials (for polynomials [`complex_step_derivative`] is exact and
/// preferred). Both shifted points must lie in the function's domain.
pub fn central_difference_derivative(
    f: &dyn FreeFunction,
    x: &MatrixTuple,
    h: &MatrixTuple,
    step: f64,
) -> Result<CMat> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument {
            arg: "step",
            reason: format!("step must be positive, got {step}"),
        });
    }
    let shift = |sign: f64| -> Result<MatrixTuple> {
        let coords: Vec<CMat> = x
            .matrices()
            .iter()
            .zip(h.matrices())
            .map(|(xi, hi)| xi + hi * C64::new(sign * step, 0.0))
            .collect();
        MatrixTuple::new(coords)
    };
    let plus = f.eval_on(&shift(1.0)?)?;
    let minus = f.eval_on(&shift(-1.0)?)?;
    Ok((plus - minus) / C64::new(2.0 * step, 0.0))
}
