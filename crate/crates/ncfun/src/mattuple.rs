//! Tuples of square complex matrices — the points on which free polynomials
//! and realization-formula functions are evaluated — together with the
//! structural operations (direct sum, similarity), operator norms, spectra,
//! and matrix-polydisc membership.

use crate::error::{Error, Result};
use crate::linalg;
use crate::{CMat, C64};

/// A d-tuple of n-by-n complex matrices at a single level n.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    entries: Vec<CMat>,
}

impl MatrixTuple {
    /// All matrices must be square and share one dimension; the tuple must be
    /// nonempty.
    pub fn new(entries: Vec<CMat>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument {
                arg: "entries",
                reason: "a matrix tuple needs at least one coordinate".into(),
            });
        }
        let n = entries[0].nrows();
        for (idx, m) in entries.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    context: "matrix tuple coordinate",
                    expected: format!("{n}x{n}"),
                    got: format!("{}x{} at coordinate {}", m.nrows(), m.ncols(), idx + 1),
                });
            }
        }
        Ok(MatrixTuple { entries })
    }

    /// Matrix dimension n (the level of the tuple).
    pub fn level(&self) -> usize {
        self.entries[0].nrows()
    }

    /// Number of coordinates d.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty tuples
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.entries
    }

    /// Coordinate matrix, 0-based.
    pub fn matrix(&self, i: usize) -> &CMat {
        &self.entries[i]
    }

    /// Entrywise block-diagonal join at level `n + m`.
    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<MatrixTuple> {
        if self.len() != other.len() {
            return Err(Error::NumVarsMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let n = self.level();
        let m = other.level();
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| {
                let mut block = CMat::zeros(n + m, n + m);
                block.view_mut((0, 0), (n, n)).copy_from(a);
                block.view_mut((n, n), (m, m)).copy_from(b);
                block
            })
            .collect();
        Ok(MatrixTuple { entries })
    }

    /// k-fold direct sum of the tuple with itself.
    pub fn ampliate(&self, k: usize) -> MatrixTuple {
        assert!(k >= 1, "ampliation order must be at least 1");
        let n = self.level();
        let entries = self
            .entries
            .iter()
            .map(|a| {
                let mut block = CMat::zeros(n * k, n * k);
                for copy in 0..k {
                    block.view_mut((copy * n, copy * n), (n, n)).copy_from(a);
                }
                block
            })
            .collect();
        MatrixTuple { entries }
    }

    /// Coordinate-wise similarity `s^{-1} x_i s`. `s` must be square of the
    /// tuple's level and numerically invertible; condition numbers of 1e8 or
    /// more are rejected.
    pub fn conjugate(&self, s: &CMat) -> Result<MatrixTuple> {
        let n = self.level();
        if s.nrows() != n || s.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "similarity matrix",
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", s.nrows(), s.ncols()),
            });
        }
        const COND_LIMIT: f64 = 1e8;
        let cond = linalg::condition_number(s);
        if !cond.is_finite() || cond >= COND_LIMIT {
            return Err(Error::IllConditioned {
                what: "similarity matrix",
                cond,
                limit: COND_LIMIT,
            });
        }
        let s_inv = linalg::inverse(s)?;
        let entries = self.entries.iter().map(|x| &s_inv * x * s).collect();
        Ok(MatrixTuple { entries })
    }

    /// Largest coordinate operator norm.
    pub fn max_coord_norm(&self) -> f64 {
        self.entries.iter().map(op_norm).fold(0.0, f64::max)
    }
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &CMat) -> f64 {
    linalg::op_norm(m)
}

/// Eigenvalues with multiplicity, sorted by real then imaginary part.
pub fn spectrum(m: &CMat) -> Vec<C64> {
    linalg::eigenvalues(m)
}

/// Condition number in the spectral norm.
pub fn condition_number(m: &CMat) -> f64 {
    linalg::condition_number(m)
}

/// An operator-norm polydisc: center tuple plus radius.
#[derive(Debug, Clone)]
pub struct PolydiscSpec {
    center: MatrixTuple,
    radius: f64,
}

impl PolydiscSpec {
    pub fn new(center: MatrixTuple, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument {
                arg: "radius",
                reason: format!("radius must be positive, got {radius}"),
            });
        }
        Ok(PolydiscSpec { center, radius })
    }

    pub fn center(&self) -> &MatrixTuple {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Largest coordinate-wise distance `max_i ‖x_i − a_i‖` to the center. A
    /// tuple at a level that is a multiple of the center level is compared
    /// against the ampliated center (k-fold direct sum); other levels are
    /// incompatible.
    pub fn distance(&self, x: &MatrixTuple) -> Result<f64> {
        if x.len() != self.center.len() {
            return Err(Error::NumVarsMismatch {
                left: x.len(),
                right: self.center.len(),
            });
        }
        let cn = self.center.level();
        let xn = x.level();
        if !xn.is_multiple_of(cn) {
            return Err(Error::IncompatibleLevels {
                level: xn,
                center: cn,
            });
        }
        let center = if xn == cn {
            self.center.clone()
        } else {
            self.center.ampliate(xn / cn)
        };
        Ok(x.matrices()
            .iter()
            .zip(center.matrices())
            .map(|(xi, ai)| op_norm(&(xi - ai)))
            .fold(0.0, f64::max))
    }

    /// Strict membership `max_i ‖x_i − a_i‖ < r`.
    pub fn contains(&self, x: &MatrixTuple) -> Result<bool> {
        Ok(self.distance(x)? < self.radius)
    }
}
