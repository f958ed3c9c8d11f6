//! Python bindings: thin wrappers over the `ncfun` crate exposing the main
//! types (polynomials, matrix tuples, polynomial matrices, realizations) and
//! operations. Matrices cross the boundary as lists of lists of Python
//! complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyType;

use ncfun::{CMat, Error};

type PyMatrix = Vec<Vec<Complex64>>;

fn to_py_err(e: Error) -> PyErr {
    match e.exit_code() {
        1 => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn mat_to_py(m: &CMat) -> PyMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn mat_from_py(rows: &PyMatrix) -> PyResult<CMat> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(PyValueError::new_err("matrix must be nonempty"));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("matrix rows must have equal length"));
    }
    Ok(CMat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

/// A free polynomial in noncommuting variables x1..xd.
#[pyclass(name = "NcPoly", skip_from_py_object)]
#[derive(Clone)]
struct PyNcPoly {
    inner: ncfun::NcPoly,
}

#[pymethods]
impl PyNcPoly {
    /// Parse an expression such as "2*x1^2 + 3*x1*x2 - 4*x2*x1".
    #[classmethod]
    fn parse(_cls: &Bound<'_, PyType>, text: &str, num_vars: usize) -> PyResult<Self> {
        Ok(PyNcPoly {
            inner: ncfun::parse_poly(text, num_vars).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn num_vars(&self) -> usize {
        self.inner.num_vars()
    }

    #[getter]
    fn degree(&self) -> i64 {
        self.inner.degree()
    }

    fn num_terms(&self) -> usize {
        self.inner.num_terms()
    }

    /// Terms as (word, coefficient) pairs in graded-lexicographic order.
    fn terms(&self) -> Vec<(Vec<usize>, Complex64)> {
        self.inner
            .terms()
            .map(|(w, &c)| (w.letters().to_vec(), c))
            .collect()
    }

    /// Symbolic directional derivative in `var`; the placeholder letter
    /// defaults to a fresh variable num_vars + 1.
    #[pyo3(signature = (var, placeholder = None))]
    fn differentiate(&self, var: usize, placeholder: Option<usize>) -> PyResult<Self> {
        let placeholder = placeholder.unwrap_or(self.inner.num_vars() + 1);
        Ok(PyNcPoly {
            inner: self
                .inner
                .directional_derivative(var, placeholder)
                .map_err(to_py_err)?,
        })
    }

    /// Evaluate on a matrix tuple.
    fn eval(&self, x: &PyMatrixTuple) -> PyResult<PyMatrix> {
        Ok(mat_to_py(
            &ncfun::eval_poly(&self.inner, &x.inner).map_err(to_py_err)?,
        ))
    }

    fn __add__(&self, rhs: &PyNcPoly) -> PyResult<Self> {
        Ok(PyNcPoly {
            inner: self.inner.add(&rhs.inner).map_err(to_py_err)?,
        })
    }

    fn __sub__(&self, rhs: &PyNcPoly) -> PyResult<Self> {
        Ok(PyNcPoly {
            inner: self.inner.sub(&rhs.inner).map_err(to_py_err)?,
        })
    }

    fn __mul__(&self, rhs: &PyNcPoly) -> PyResult<Self> {
        Ok(PyNcPoly {
            inner: self.inner.mul(&rhs.inner).map_err(to_py_err)?,
        })
    }

    fn __neg__(&self) -> Self {
        PyNcPoly {
            inner: self.inner.neg(),
        }
    }

    fn __richcmp__(&self, other: &PyNcPoly, op: pyo3::basic::CompareOp) -> PyResult<bool> {
        match op {
            pyo3::basic::CompareOp::Eq => Ok(self.inner == other.inner),
            pyo3::basic::CompareOp::Ne => Ok(self.inner != other.inner),
            _ => Err(PyValueError::new_err("polynomials are not ordered")),
        }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("NcPoly({}, num_vars={})", self.inner, self.inner.num_vars())
    }
}

/// A d-tuple of n-by-n complex matrices.
#[pyclass(name = "MatrixTuple", skip_from_py_object)]
#[derive(Clone)]
struct PyMatrixTuple {
    inner: ncfun::MatrixTuple,
}

#[pymethods]
impl PyMatrixTuple {
    #[new]
    fn new(matrices: Vec<PyMatrix>) -> PyResult<Self> {
        let entries = matrices
            .iter()
            .map(mat_from_py)
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyMatrixTuple {
            inner: ncfun::MatrixTuple::new(entries).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn level(&self) -> usize {
        self.inner.level()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn matrices(&self) -> Vec<PyMatrix> {
        self.inner.matrices().iter().map(mat_to_py).collect()
    }

    fn direct_sum(&self, other: &PyMatrixTuple) -> PyResult<Self> {
        Ok(PyMatrixTuple {
            inner: self.inner.direct_sum(&other.inner).map_err(to_py_err)?,
        })
    }

    fn conjugate(&self, s: PyMatrix) -> PyResult<Self> {
        Ok(PyMatrixTuple {
            inner: self.inner.conjugate(&mat_from_py(&s)?).map_err(to_py_err)?,
        })
    }

    fn max_coord_norm(&self) -> f64 {
        self.inner.max_coord_norm()
    }

    fn __repr__(&self) -> String {
        format!(
            "MatrixTuple(d={}, n={})",
            self.inner.len(),
            self.inner.level()
        )
    }
}

/// A rectangular matrix of polynomials (the defining delta of a polynomial
/// polyhedron), built from a grid of expression strings.
#[pyclass(name = "PolyMatrix", skip_from_py_object)]
#[derive(Clone)]
struct PyPolyMatrix {
    inner: ncfun::PolyMatrix,
}

#[pymethods]
impl PyPolyMatrix {
    #[new]
    fn new(entries: Vec<Vec<String>>, num_vars: usize) -> PyResult<Self> {
        if entries.is_empty() || entries[0].is_empty() {
            return Err(PyValueError::new_err("entry grid must be nonempty"));
        }
        let cols = entries[0].len();
        if entries.iter().any(|r| r.len() != cols) {
            return Err(PyValueError::new_err("entry rows must have equal length"));
        }
        let polys = entries
            .iter()
            .flatten()
            .map(|text| ncfun::parse_poly(text, num_vars).map_err(to_py_err))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyPolyMatrix {
            inner: ncfun::PolyMatrix::new(entries.len(), cols, polys).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    #[getter]
    fn num_vars(&self) -> usize {
        self.inner.num_vars()
    }

    /// Blockwise evaluation: an (I*n)-by-(J*n) matrix.
    fn eval(&self, x: &PyMatrixTuple) -> PyResult<PyMatrix> {
        Ok(mat_to_py(
            &ncfun::eval_poly_matrix(&self.inner, &x.inner).map_err(to_py_err)?,
        ))
    }

    /// Membership test ‖t * delta(x)‖ < 1.
    #[pyo3(signature = (x, t = 1.0))]
    fn contains(&self, x: &PyMatrixTuple, t: f64) -> PyResult<bool> {
        ncfun::gdelta_contains(&self.inner, &x.inner, t).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "PolyMatrix({}x{}, num_vars={})",
            self.inner.rows(),
            self.inner.cols(),
            self.inner.num_vars()
        )
    }
}

/// An isometric colligation realizing a bounded function on a polynomial
/// polyhedron.
#[pyclass(name = "Realization", skip_from_py_object)]
#[derive(Clone)]
struct PyRealization {
    inner: ncfun::Realization,
}

#[pymethods]
impl PyRealization {
    #[new]
    fn new(
        delta: &PyPolyMatrix,
        aux_dim: usize,
        alpha: Complex64,
        b: PyMatrix,
        c: PyMatrix,
        d: PyMatrix,
    ) -> PyResult<Self> {
        Ok(PyRealization {
            inner: ncfun::Realization::new(
                delta.inner.clone(),
                aux_dim,
                alpha,
                mat_from_py(&b)?,
                mat_from_py(&c)?,
                mat_from_py(&d)?,
            )
            .map_err(to_py_err)?,
        })
    }

    /// Load from the JSON format the CLI uses.
    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        Ok(PyRealization {
            inner: ncfun::jsonio::parse_realization(text).map_err(to_py_err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&ncfun::jsonio::realization_to_json(&self.inner))
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn aux_dim(&self) -> usize {
        self.inner.aux_dim()
    }

    #[getter]
    fn alpha(&self) -> Complex64 {
        self.inner.alpha()
    }

    /// Operator-norm defect of V*V from the identity.
    fn validate_isometry(&self) -> f64 {
        self.inner.validate_isometry()
    }

    fn eval(&self, x: &PyMatrixTuple) -> PyResult<PyMatrix> {
        Ok(mat_to_py(&self.inner.eval(&x.inner).map_err(to_py_err)?))
    }

    /// Free-polynomial approximant of the given truncation order.
    fn neumann_truncate(&self, order: usize) -> PyNcPoly {
        PyNcPoly {
            inner: self.inner.neumann_truncate(order),
        }
    }

    /// Numeric value of the order-N partial sum at a tuple.
    fn neumann_partial_sum(&self, x: &PyMatrixTuple, order: usize) -> PyResult<PyMatrix> {
        Ok(mat_to_py(
            &self
                .inner
                .neumann_partial_sum(&x.inner, order)
                .map_err(to_py_err)?,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Realization(aux_dim={}, num_vars={})",
            self.inner.aux_dim(),
            self.inner.num_vars()
        )
    }
}

#[pyfunction]
fn op_norm(m: PyMatrix) -> PyResult<f64> {
    Ok(ncfun::op_norm(&mat_from_py(&m)?))
}

#[pyfunction]
fn spectrum(m: PyMatrix) -> PyResult<Vec<Complex64>> {
    Ok(ncfun::spectrum(&mat_from_py(&m)?))
}

#[pyfunction]
fn block_derivative(p: &PyNcPoly, x: &PyMatrixTuple, h: &PyMatrixTuple) -> PyResult<PyMatrix> {
    Ok(mat_to_py(
        &ncfun::block_derivative(&p.inner, &x.inner, &h.inner).map_err(to_py_err)?,
    ))
}

#[pyfunction]
fn symbolic_derivative_eval(
    p: &PyNcPoly,
    x: &PyMatrixTuple,
    h: &PyMatrixTuple,
) -> PyResult<PyMatrix> {
    Ok(mat_to_py(
        &ncfun::symbolic_derivative_eval(&p.inner, &x.inner, &h.inner).map_err(to_py_err)?,
    ))
}

#[pyfunction]
fn complex_step_derivative(
    p: &PyNcPoly,
    x: &PyMatrixTuple,
    h: &PyMatrixTuple,
) -> PyResult<PyMatrix> {
    Ok(mat_to_py(
        &ncfun::complex_step_derivative(&p.inner, &x.inner, &h.inner).map_err(to_py_err)?,
    ))
}

/// Flattened matrix of the derivative restricted to the selected variables,
/// acting on column-stacked directions.
#[pyfunction]
fn derivative_operator(p: &PyNcPoly, x: &PyMatrixTuple, vars: Vec<usize>) -> PyResult<PyMatrix> {
    Ok(mat_to_py(
        ncfun::derivative_operator(&p.inner, &x.inner, &vars)
            .map_err(to_py_err)?
            .matrix(),
    ))
}

#[pyfunction]
fn solve_sylvester(a: PyMatrix, b: PyMatrix, c: PyMatrix) -> PyResult<PyMatrix> {
    Ok(mat_to_py(
        &ncfun::solve_sylvester(&mat_from_py(&a)?, &mat_from_py(&b)?, &mat_from_py(&c)?)
            .map_err(to_py_err)?,
    ))
}

#[pyfunction]
fn spectra_disjoint(a: PyMatrix, b: PyMatrix, gap: f64) -> PyResult<bool> {
    Ok(ncfun::spectra_disjoint(
        &mat_from_py(&a)?,
        &mat_from_py(&b)?,
        gap,
    ))
}

#[pyfunction]
fn sylvester_kernel_exists(a: PyMatrix, b: PyMatrix, tol: f64) -> PyResult<bool> {
    ncfun::sylvester_kernel_exists(&mat_from_py(&a)?, &mat_from_py(&b)?, tol).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (p, fixed, y0, tol = 1e-12, max_iter = 50))]
fn newton_implicit_solve<'py>(
    py: Python<'py>,
    p: &PyNcPoly,
    fixed: Vec<PyMatrix>,
    y0: PyMatrix,
    tol: f64,
    max_iter: usize,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let fixed = fixed
        .iter()
        .map(mat_from_py)
        .collect::<PyResult<Vec<_>>>()?;
    let opts = ncfun::NewtonOptions {
        tol,
        max_iter,
        ..ncfun::NewtonOptions::default()
    };
    let outcome = ncfun::newton_implicit_solve(&p.inner, &fixed, &mat_from_py(&y0)?, &opts)
        .map_err(to_py_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("y", mat_to_py(&outcome.solution))?;
    dict.set_item("residual", outcome.residual_norm)?;
    dict.set_item("iterations", outcome.iterations)?;
    dict.set_item("residual_history", outcome.residual_history)?;
    Ok(dict)
}

#[pyfunction]
fn commutation_residual(x: PyMatrix, y: PyMatrix) -> PyResult<f64> {
    ncfun::commutation_residual(&mat_from_py(&x)?, &mat_from_py(&y)?).map_err(to_py_err)
}

#[pyfunction]
fn demo_cubic_poly() -> PyNcPoly {
    PyNcPoly {
        inner: ncfun::demo_cubic_poly(),
    }
}

#[pyfunction]
fn demo_cubic_genericity(x: PyMatrix, gap: f64) -> PyResult<bool> {
    Ok(ncfun::demo_cubic_genericity(&mat_from_py(&x)?, gap))
}

#[pyfunction]
fn riccati_residual(a: PyMatrix, b: PyMatrix, c: PyMatrix, x: PyMatrix) -> PyResult<PyMatrix> {
    let data = ncfun::RiccatiData::new(
        mat_from_py(&a)?,
        mat_from_py(&b)?,
        mat_from_py(&c)?,
        mat_from_py(&x)?,
    )
    .map_err(to_py_err)?;
    Ok(mat_to_py(&ncfun::riccati_residual(&data)))
}

#[pyfunction]
fn riccati_lmi_block(a: PyMatrix, b: PyMatrix, c: PyMatrix, x: PyMatrix) -> PyResult<PyMatrix> {
    let data = ncfun::RiccatiData::new(
        mat_from_py(&a)?,
        mat_from_py(&b)?,
        mat_from_py(&c)?,
        mat_from_py(&x)?,
    )
    .map_err(to_py_err)?;
    Ok(mat_to_py(&ncfun::riccati_lmi_block(&data)))
}

#[pyfunction]
fn is_positive_definite(m: PyMatrix, margin: f64) -> PyResult<bool> {
    ncfun::is_positive_definite(&mat_from_py(&m)?, margin).map_err(to_py_err)
}

#[pyfunction]
fn schur_equivalence_check(
    a: PyMatrix,
    b: PyMatrix,
    c: PyMatrix,
    x: PyMatrix,
    margin: f64,
) -> PyResult<bool> {
    let data = ncfun::RiccatiData::new(
        mat_from_py(&a)?,
        mat_from_py(&b)?,
        mat_from_py(&c)?,
        mat_from_py(&x)?,
    )
    .map_err(to_py_err)?;
    ncfun::schur_equivalence_check(&data, margin).map_err(to_py_err)
}

#[pyfunction]
fn polydisc_contains(center: &PyMatrixTuple, radius: f64, x: &PyMatrixTuple) -> PyResult<bool> {
    let spec = ncfun::PolydiscSpec::new(center.inner.clone(), radius).map_err(to_py_err)?;
    spec.contains(&x.inner).map_err(to_py_err)
}

#[pyfunction]
fn intertwining_check(
    p: &PyNcPoly,
    x: &PyMatrixTuple,
    y: &PyMatrixTuple,
    t: PyMatrix,
    tol: f64,
) -> PyResult<bool> {
    ncfun::intertwining_check(&p.inner, &x.inner, &y.inner, &mat_from_py(&t)?, tol)
        .map_err(to_py_err)
}

#[pymodule]
fn ncfun_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNcPoly>()?;
    m.add_class::<PyMatrixTuple>()?;
    m.add_class::<PyPolyMatrix>()?;
    m.add_class::<PyRealization>()?;
    m.add_function(wrap_pyfunction!(op_norm, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(block_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(symbolic_derivative_eval, m)?)?;
    m.add_function(wrap_pyfunction!(complex_step_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(derivative_operator, m)?)?;
    m.add_function(wrap_pyfunction!(solve_sylvester, m)?)?;
    m.add_function(wrap_pyfunction!(spectra_disjoint, m)?)?;
    m.add_function(wrap_pyfunction!(sylvester_kernel_exists, m)?)?;
    m.add_function(wrap_pyfunction!(newton_implicit_solve, m)?)?;
    m.add_function(wrap_pyfunction!(commutation_residual, m)?)?;
    m.add_function(wrap_pyfunction!(demo_cubic_poly, m)?)?;
    m.add_function(wrap_pyfunction!(demo_cubic_genericity, m)?)?;
    m.add_function(wrap_pyfunction!(riccati_residual, m)?)?;
    m.add_function(wrap_pyfunction!(riccati_lmi_block, m)?)?;
    m.add_function(wrap_pyfunction!(is_positive_definite, m)?)?;
    m.add_function(wrap_pyfunction!(schur_equivalence_check, m)?)?;
    m.add_function(wrap_pyfunction!(polydisc_contains, m)?)?;
    m.add_function(wrap_pyfunction!(intertwining_check, m)?)?;
    Ok(())
}
