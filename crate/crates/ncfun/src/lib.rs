//! Computing with free noncommutative functions.
//!
//! The crate evaluates free polynomials and realization-formula functions on
//! d-tuples of square complex matrices, differentiates them several
//! independent ways, solves Sylvester and implicit matrix equations, reduces
//! Riccati-type inequalities to linear matrix inequalities, and enforces the
//! structural axioms of the theory — direct sums, similarities, intertwining
//! — as testable invariants.
//!
//! Modules:
//! - [`freealg`]: words, sparse polynomials, polynomial matrices, the
//!   expression grammar, symbolic differentiation.
//! - [`mattuple`]: matrix tuples, direct sums, similarity, norms, spectra,
//!   polydisc membership.
//! - [`evaluator`]: graded evaluation, block-triangular derivatives,
//!   flattened derivative operators, intertwining checks.
//! - [`sylvester`]: `AH - HB = C` solvers and spectral-disjointness analysis.
//! - [`implicit`]: damped Newton solving of `p(X, Y) = 0` for `Y`.
//! - [`lmi`]: Riccati residual, LMI block form, positivity verdicts.
//! - [`realization`]: isometric colligations, evaluation on polynomial
//!   polyhedra, Neumann-series truncation.
//! - [`cli`]: the command-line surface.
//!
//! All values are immutable after construction and every operation is pure,
//! so concurrent use needs no coordination.
//!
//! ```
//! use ncfun::{eval_poly, parse_poly, MatrixTuple, CMat, C64};
//!
//! // [x1, x2] at (E12, E11) is -E12.
//! let p = parse_poly("x1*x2 - x2*x1", 2).unwrap();
//! let e12 = CMat::from_fn(2, 2, |i, j| C64::new(f64::from(i == 0 && j == 1), 0.0));
//! let e11 = CMat::from_fn(2, 2, |i, j| C64::new(f64::from(i == 0 && j == 0), 0.0));
//! let x = MatrixTuple::new(vec![e12.clone(), e11]).unwrap();
//! assert_eq!(eval_poly(&p, &x).unwrap(), -e12);
//! ```

// Guards of the form `!(x >= bound)` are deliberate: they reject NaN inputs
// along with out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub type C64 = num_complex::Complex64;
pub type CMat = nalgebra::DMatrix<C64>;

pub mod cli;
pub mod error;
pub mod evaluator;
pub mod freealg;
pub mod implicit;
pub mod jsonio;
pub mod linalg;
pub mod lmi;
pub mod mattuple;
pub mod realization;
pub mod sample;
pub mod sylvester;

pub use error::{Error, Result};
pub use evaluator::{
    block_derivative, complex_step_derivative, derivative_operator, eval_poly, eval_poly_matrix,
    gdelta_contains, intertwining_check, symbolic_derivative_eval, FreeFunction, LinearMapMatrix,
};
pub use freealg::{parse_poly, NcPoly, PolyMatrix, Word};
pub use implicit::{
    commutation_residual, demo_cubic_genericity, demo_cubic_poly, newton_implicit_solve,
    NewtonOptions, NewtonOutcome,
};
pub use lmi::{
    is_positive_definite, positivity_verdict, riccati_lmi_block, riccati_residual,
    schur_equivalence_check, PositivityVerdict, RiccatiData,
};
pub use mattuple::{op_norm, spectrum, MatrixTuple, PolydiscSpec};
pub use realization::{approx_error_sweep, Realization, SweepRow};
pub use sylvester::{
    solve_sylvester, spectra_disjoint, sylvester_kernel_exists, DisjointnessVerdict,
};
