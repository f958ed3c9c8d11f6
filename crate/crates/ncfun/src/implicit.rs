//! Local implicit-function solving for matrix equations `p(X, ..., Y) = 0`:
//! damped Newton iteration on the last matrix variable using the flattened
//! derivative operator, a genericity check for the demo cubic, and the
//! commutation residual its solutions are expected to satisfy.

use crate::error::{Error, Result};
use crate::evaluator::{derivative_operator, eval_poly};
use crate::freealg::{parse_poly, NcPoly};
use crate::linalg;
use crate::mattuple::MatrixTuple;
use crate::sylvester::spectra_disjoint;
use crate::{CMat, C64};

/// The demo cubic `X^3 + 2X^2 Y + 3YX + 4X + 5Y + 6 = 0`, the flagship
/// instance for the implicit solver: it is affine in `Y` and, for generic `X`,
/// its solutions commute with `X`.
pub fn demo_cubic_poly() -> NcPoly {
    parse_poly("x1^3 + 2*x1^2*x2 + 3*x2*x1 + 4*x1 + 5*x2 + 6", 2).expect("demo cubic parses")
}

/// Genericity of `X` for the demo cubic: the Y-derivative
/// `H -> 2X^2 H + 3HX + 5H` is invertible iff the spectra of `2X^2` and
/// `-3X - 5I` are disjoint.
pub fn demo_cubic_genericity(x: &CMat, gap: f64) -> bool {
    let n = x.nrows();
    let two_x2 = x * x * C64::new(2.0, 0.0);
    let rhs = x * C64::new(-3.0, 0.0) - CMat::identity(n, n) * C64::new(5.0, 0.0);
    spectra_disjoint(&two_x2, &rhs, gap)
}

/// Options for the damped Newton iteration.
#[derive(Debug, Clone)]
pub struct NewtonOptions {
    /// Converged once the residual operator norm drops to this.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of step halvings tried before declaring no progress.
    pub max_damping: usize,
    /// Condition-number limit on the derivative operator at each iterate.
    pub cond_limit: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iter: 50,
            max_damping: 20,
            cond_limit: 1e10,
        }
    }
}

/// Result of a converged Newton run.
#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub solution: CMat,
    pub residual_norm: f64,
    /// Number of Newton updates applied.
    pub iterations: usize,
    /// Residual operator norms, starting with the initial guess.
    pub residual_history: Vec<f64>,
}

/// Solve `p(fixed_1, ..., fixed_{d-1}, Y) = 0` for the last variable by damped
/// Newton iteration from `y0`. Each step solves the flattened n^2-by-n^2
/// linear system given by the derivative operator in the last slot; the full
/// step is halved until the residual decreases.
pub fn newton_implicit_solve(
    p: &NcPoly,
    fixed: &[CMat],
    y0: &CMat,
    opts: &NewtonOptions,
) -> Result<NewtonOutcome> {
    let d = p.num_vars();
    if fixed.len() + 1 != d {
        return Err(Error::InvalidArgument {
            arg: "fixed",
            reason: format!(
                "{} fixed matrices do not leave exactly one of {} variables free",
                fixed.len(),
                d
            ),
        });
    }
    let n = y0.nrows();
    if y0.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "initial guess",
            expected: "square matrix".into(),
            got: format!("{}x{}", y0.nrows(), y0.ncols()),
        });
    }
    for (idx, m) in fixed.iter().enumerate() {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "fixed coordinate",
                expected: format!("{n}x{n}"),
                got: format!("{}x{} at position {}", m.nrows(), m.ncols(), idx + 1),
            });
        }
    }

    let tuple_with = |y: &CMat| -> Result<MatrixTuple> {
        let mut coords = fixed.to_vec();
        coords.push(y.clone());
        MatrixTuple::new(coords)
    };

    let mut y = y0.clone();
    let mut residual = eval_poly(p, &tuple_with(&y)?)?;
    let mut res_norm = linalg::op_norm(&residual);
    let mut history = vec![res_norm];

    for iteration in 0..opts.max_iter {
        if res_norm <= opts.tol {
            return Ok(NewtonOutcome {
                solution: y,
                residual_norm: res_norm,
                iterations: iteration,
                residual_history: history,
            });
        }
        let op = derivative_operator(p, &tuple_with(&y)?, &[d])?;
        let smin = op.smallest_singular_value();
        let cond = op.condition_number();
        if !cond.is_finite() || cond >= opts.cond_limit {
            return Err(Error::SingularDerivative { iteration, smin });
        }
        let step_vec = linalg::solve(op.matrix(), &linalg::vectorize(&residual))?;
        let full_step = linalg::unvectorize(&step_vec, n, n);

        let mut accepted = false;
        let mut scale = 1.0;
        for _ in 0..=opts.max_damping {
            let y_try = &y - &full_step * C64::new(scale, 0.0);
            let r_try = eval_poly(p, &tuple_with(&y_try)?)?;
            let r_try_norm = linalg::op_norm(&r_try);
            if r_try_norm < res_norm {
                y = y_try;
                residual = r_try;
                res_norm = r_try_norm;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            return Err(Error::NoProgress {
                iteration,
                residual: res_norm,
            });
        }
        history.push(res_norm);
    }

    if res_norm <= opts.tol {
        Ok(NewtonOutcome {
            solution: y,
            residual_norm: res_norm,
            iterations: opts.max_iter,
            residual_history: history,
        })
    } else {
        Err(Error::MaxIterExceeded {
            max_iter: opts.max_iter,
            residual: res_norm,
        })
    }
}

/// Operator norm of the commutator `XY - YX`.
pub fn commutation_residual(x: &CMat, y: &CMat) -> Result<f64> {
    if x.nrows() != y.nrows() || x.ncols() != y.ncols() || x.nrows() != x.ncols() {
        return Err(Error::DimensionMismatch {
            context: "commutator",
            expected: format!("{}x{} square pair", x.nrows(), x.nrows()),
            got: format!("{}x{}", y.nrows(), y.ncols()),
        });
    }
    Ok(linalg::op_norm(&(x * y - y * x)))
}
