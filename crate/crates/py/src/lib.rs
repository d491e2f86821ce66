//! Python bindings. Grid functions cross the boundary as `GridFunction`
//! objects holding a base point, a first offset and a list of values.

use nabla_green as ng;
use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

create_exception!(nabla_green, SingularError, PyValueError, "The boundary matrix or linear system is (near) singular.");

fn to_py(e: ng::Error) -> PyErr {
    match e {
        ng::Error::OffGrid { .. } => PyIndexError::new_err(e.to_string()),
        ng::Error::NearSingular { .. } | ng::Error::DegenerateDenominator { .. } | ng::Error::SingularSystem { .. } => {
            SingularError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for ng::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Values on consecutive offsets `lo, lo+1, ...` from the real base `a`.
#[pyclass(name = "GridFunction", module = "nabla_green", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGridFunction {
    inner: ng::GridFunction,
}

impl From<ng::GridFunction> for PyGridFunction {
    fn from(inner: ng::GridFunction) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyGridFunction {
    #[new]
    #[pyo3(signature = (values, lo = 0, a = 0.0))]
    fn new(values: Vec<f64>, lo: i64, a: f64) -> PyResult<Self> {
        if values.is_empty() {
            return Err(PyValueError::new_err("values must not be empty"));
        }
        let grid = ng::Grid::new(a, lo, lo + values.len() as i64 - 1).py_err()?;
        Ok(ng::GridFunction::from_values(grid, values).py_err()?.into())
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.base()
    }

    #[getter]
    fn lo(&self) -> i64 {
        self.inner.lo()
    }

    #[getter]
    fn hi(&self) -> i64 {
        self.inner.hi()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    /// Real points `a + k` for every stored offset `k`.
    #[getter]
    fn points(&self) -> Vec<f64> {
        self.inner.grid().offsets().map(|k| self.inner.grid().point(k)).collect()
    }

    fn at(&self, offset: i64) -> PyResult<f64> {
        self.inner.at(offset).py_err()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "GridFunction(a={}, lo={}, hi={}, values={:?})",
            self.inner.base(),
            self.inner.lo(),
            self.inner.hi(),
            self.inner.values()
        )
    }
}

/// `L x(t) = ∇[p(t) ∇_{a*}^ν x(t)] + q(t) x(t-1)` on `[a+N+1, b]`.
#[pyclass(name = "Operator", module = "nabla_green", frozen)]
pub struct PyOperator {
    inner: ng::FracOperator,
}

fn coefficient(obj: &Bound<'_, PyAny>, a: f64, b: i64, name: &str) -> PyResult<ng::GridFunction> {
    if let Ok(c) = obj.extract::<f64>() {
        return Ok(ng::GridFunction::constant(ng::Grid::new(a, 0, b).py_err()?, c));
    }
    if let Ok(g) = obj.extract::<PyRef<'_, PyGridFunction>>() {
        return Ok(g.inner.clone());
    }
    Err(PyValueError::new_err(format!("{name} must be a float or a GridFunction")))
}

#[pymethods]
impl PyOperator {
    /// `b` is the offset `b - a`. `p` and `q` are floats or GridFunctions
    /// based at `a`.
    #[new]
    #[pyo3(signature = (a, nu, b, p = None, q = None))]
    fn new(a: f64, nu: f64, b: i64, p: Option<&Bound<'_, PyAny>>, q: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let one = ng::GridFunction::constant(ng::Grid::new(a, 0, b.max(0)).py_err()?, 1.0);
        let p = match p {
            Some(p) => coefficient(p, a, b.max(0), "p")?,
            None => one.clone(),
        };
        let q = match q {
            Some(q) => coefficient(q, a, b.max(0), "q")?,
            None => one.scale(0.0),
        };
        Ok(Self {
            inner: ng::FracOperator::new(a, nu, b, p, q).py_err()?,
        })
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a()
    }

    #[getter]
    fn nu(&self) -> f64 {
        self.inner.nu()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn b(&self) -> i64 {
        self.inner.b()
    }

    fn apply(&self, x: PyRef<'_, PyGridFunction>) -> PyResult<PyGridFunction> {
        Ok(self.inner.apply(&x.inner).py_err()?.into())
    }

    fn cauchy(&self) -> PyResult<PyCauchy> {
        Ok(PyCauchy {
            inner: ng::cauchy_function(&self.inner).py_err()?,
        })
    }

    /// `max |L x - h|` over the equation rows.
    fn residual(&self, x: PyRef<'_, PyGridFunction>, h: &Bound<'_, PyAny>) -> PyResult<f64> {
        let h = forcing(&self.inner, h)?;
        ng::residual(&self.inner, &x.inner, &h).py_err()
    }

    fn __repr__(&self) -> String {
        format!("Operator(a={}, nu={}, b={})", self.inner.a(), self.inner.nu(), self.inner.b())
    }
}

/// Forcing as a GridFunction, or a plain list of values on offsets `[N+1, b]`.
fn forcing(op: &ng::FracOperator, h: &Bound<'_, PyAny>) -> PyResult<ng::GridFunction> {
    if let Ok(g) = h.extract::<PyRef<'_, PyGridFunction>>() {
        return Ok(g.inner.clone());
    }
    let values: Vec<f64> = h.extract()?;
    ng::GridFunction::from_values(op.equation_grid(), values).py_err()
}

#[pyclass(name = "CauchyFunction", module = "nabla_green", frozen)]
pub struct PyCauchy {
    inner: ng::CauchyFunction,
}

#[pymethods]
impl PyCauchy {
    fn value(&self, t: i64, s: i64) -> PyResult<f64> {
        self.inner.value(t, s).py_err()
    }

    /// Column `s` on `[-N+1, b]`.
    fn column(&self, s: i64) -> PyResult<PyGridFunction> {
        Ok(self.inner.extended_column(s).py_err()?.into())
    }

    #[getter]
    fn s_range(&self) -> (i64, i64) {
        let r = self.inner.s_range();
        (*r.start(), *r.end())
    }

    fn convolve(&self, h: PyRef<'_, PyGridFunction>) -> PyResult<PyGridFunction> {
        Ok(self.inner.convolve(&h.inner).py_err()?.into())
    }
}

#[pyclass(name = "BoundarySpec", module = "nabla_green", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyBoundarySpec {
    inner: ng::BoundarySpec,
}

#[pymethods]
impl PyBoundarySpec {
    /// `Σ_j alpha[i][j] ∇^j x(a+j) = A[i]` and `Σ_j beta[j] ∇^j x(b) = B`.
    #[new]
    #[pyo3(signature = (alpha, left, beta, right))]
    fn new(alpha: Vec<Vec<f64>>, left: Vec<f64>, beta: Vec<f64>, right: f64) -> PyResult<Self> {
        Ok(Self {
            inner: ng::BoundarySpec::new(alpha, left, beta, right).py_err()?,
        })
    }

    /// `x(a) = left, ∇x(a+1) = slope, x(b) = right`.
    #[staticmethod]
    #[pyo3(signature = (left = 0.0, slope = 0.0, right = 0.0))]
    fn conjugate(left: f64, slope: f64, right: f64) -> Self {
        Self {
            inner: ng::BoundarySpec::conjugate(left, slope, right),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }
}

#[pyclass(name = "GreensFunction", module = "nabla_green", frozen)]
pub struct PyGreens {
    inner: ng::GreensFunction,
}

#[pymethods]
impl PyGreens {
    fn value(&self, t: i64, s: i64) -> PyResult<f64> {
        self.inner.value(t, s).py_err()
    }

    /// `"u"`, `"v"`, or `"u*"` outside both stated regions.
    fn branch(&self, t: i64, s: i64) -> String {
        self.inner.branch(t, s).to_string()
    }

    #[getter]
    fn t_range(&self) -> (i64, i64) {
        let r = self.inner.t_range();
        (*r.start(), *r.end())
    }

    #[getter]
    fn s_range(&self) -> (i64, i64) {
        let r = self.inner.s_range();
        (*r.start(), *r.end())
    }

    /// `Σ_s G(t, s) h(s)`.
    fn solve(&self, h: PyRef<'_, PyGridFunction>) -> PyResult<PyGridFunction> {
        Ok(ng::greens_solve(&self.inner, &h.inner).py_err()?.into())
    }

    /// Rows `(t, s, G, branch)` over the whole table.
    fn table(&self) -> PyResult<Vec<(i64, i64, f64, String)>> {
        let mut rows = Vec::new();
        for t in self.inner.t_range() {
            for s in self.inner.s_range() {
                rows.push((t, s, self.inner.value(t, s).py_err()?, self.inner.branch(t, s).to_string()));
            }
        }
        Ok(rows)
    }
}

fn basis_kind(kind: &str) -> PyResult<ng::BasisKind> {
    match kind {
        "numeric" => Ok(ng::BasisKind::Numeric),
        "analytic" => Ok(ng::BasisKind::Analytic),
        other => Err(PyValueError::new_err(format!("basis must be 'numeric' or 'analytic', got {other:?}"))),
    }
}

fn basis_for(op: &ng::FracOperator, kind: Option<&str>) -> PyResult<Vec<ng::GridFunction>> {
    let kind = match kind {
        Some(k) => basis_kind(k)?,
        None if op.is_unit() => ng::BasisKind::Analytic,
        None => ng::BasisKind::Numeric,
    };
    ng::homogeneous_basis(op, kind).py_err()
}

#[pyfunction]
fn taylor_monomial(m: i64, nu: f64) -> f64 {
    ng::taylor_monomial(m, nu)
}

#[pyfunction]
fn rising(m: i64, nu: f64) -> f64 {
    ng::rising(m, nu)
}

#[pyfunction]
fn frac_integral(f: PyRef<'_, PyGridFunction>, base: i64, nu: f64) -> PyResult<PyGridFunction> {
    Ok(ng::frac_integral(&f.inner, base, nu).py_err()?.into())
}

#[pyfunction]
fn rl_difference(f: PyRef<'_, PyGridFunction>, base: i64, nu: f64) -> PyResult<PyGridFunction> {
    Ok(ng::rl_difference(&f.inner, base, nu).py_err()?.into())
}

#[pyfunction]
fn caputo_difference(f: PyRef<'_, PyGridFunction>, base: i64, nu: f64) -> PyResult<PyGridFunction> {
    Ok(ng::caputo_difference(&f.inner, base, nu).py_err()?.into())
}

/// `A` holds `∇^i x(a+i)` for `i = 0..=N`; `ghosts` holds `x(a-1), x(a-2), ...`
/// (zeros when omitted).
#[pyfunction]
#[pyo3(signature = (op, h, initial, ghosts = None))]
fn solve_ivp(op: PyRef<'_, PyOperator>, h: &Bound<'_, PyAny>, initial: Vec<f64>, ghosts: Option<Vec<f64>>) -> PyResult<PyGridFunction> {
    let h = forcing(&op.inner, h)?;
    let closure = ghosts.map_or(ng::GhostClosure::Zero, ng::GhostClosure::Explicit);
    let ic = ng::InitialConditions::new(initial, closure);
    Ok(ng::solve_ivp(&op.inner, &h, &ic).py_err()?.into())
}

/// The same initial value problem, solved by dense elimination.
#[pyfunction]
#[pyo3(signature = (op, h, initial, ghosts = None))]
fn dense_solve_ivp(op: PyRef<'_, PyOperator>, h: &Bound<'_, PyAny>, initial: Vec<f64>, ghosts: Option<Vec<f64>>) -> PyResult<PyGridFunction> {
    let h = forcing(&op.inner, h)?;
    let closure = ghosts.map_or(ng::GhostClosure::Zero, ng::GhostClosure::Explicit);
    let problem = ng::Problem::Ivp(ng::InitialConditions::new(initial, closure));
    let sys = ng::assemble(&op.inner, &problem, &h).py_err()?;
    Ok(ng::dense_solve(&sys).py_err()?.x.into())
}

#[pyfunction]
fn variation_of_constants(op: PyRef<'_, PyOperator>, h: &Bound<'_, PyAny>) -> PyResult<PyGridFunction> {
    let h = forcing(&op.inner, h)?;
    Ok(ng::variation_of_constants(&op.inner, &h).py_err()?.into())
}

#[pyfunction]
#[pyo3(signature = (op, kind = "numeric"))]
fn homogeneous_basis(op: PyRef<'_, PyOperator>, kind: &str) -> PyResult<Vec<PyGridFunction>> {
    let basis = ng::homogeneous_basis(&op.inner, basis_kind(kind)?).py_err()?;
    Ok(basis.into_iter().map(Into::into).collect())
}

/// The basis defaults to the analytic one for `p ≡ 1, q ≡ 0` and the numeric
/// one otherwise.
#[pyfunction]
#[pyo3(signature = (op, h, spec, basis = None))]
fn solve_bvp(op: PyRef<'_, PyOperator>, h: &Bound<'_, PyAny>, spec: PyRef<'_, PyBoundarySpec>, basis: Option<&str>) -> PyResult<PyGridFunction> {
    let h = forcing(&op.inner, h)?;
    let basis = basis_for(&op.inner, basis)?;
    Ok(ng::solve_bvp(&op.inner, &h, &spec.inner, &basis).py_err()?.into())
}

#[pyfunction]
#[pyo3(signature = (op, spec, basis = None))]
fn build_greens(op: PyRef<'_, PyOperator>, spec: PyRef<'_, PyBoundarySpec>, basis: Option<&str>) -> PyResult<PyGreens> {
    let basis = basis_for(&op.inner, basis)?;
    Ok(PyGreens {
        inner: ng::build_greens(&op.inner, &spec.inner, &basis).py_err()?,
    })
}

/// Closed form for `∇∇_{a*}^ν x = h` with conjugate conditions; `b` is `b - a`.
#[pyfunction]
fn conjugate_greens(a: f64, b: i64, nu: f64) -> PyResult<PyGreens> {
    Ok(PyGreens {
        inner: ng::conjugate_greens_closed_form(a, b, nu).py_err()?,
    })
}

#[pyfunction]
fn compare_greens(g1: PyRef<'_, PyGreens>, g2: PyRef<'_, PyGreens>) -> PyResult<f64> {
    ng::compare_greens(&g1.inner, &g2.inner).py_err()
}

#[pymodule]
#[pyo3(name = "nabla_green")]
pub fn nabla_green_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SingularError", m.py().get_type::<SingularError>())?;
    m.add_class::<PyGridFunction>()?;
    m.add_class::<PyOperator>()?;
    m.add_class::<PyCauchy>()?;
    m.add_class::<PyBoundarySpec>()?;
    m.add_class::<PyGreens>()?;
    m.add_function(wrap_pyfunction!(taylor_monomial, m)?)?;
    m.add_function(wrap_pyfunction!(rising, m)?)?;
    m.add_function(wrap_pyfunction!(frac_integral, m)?)?;
    m.add_function(wrap_pyfunction!(rl_difference, m)?)?;
    m.add_function(wrap_pyfunction!(caputo_difference, m)?)?;
    m.add_function(wrap_pyfunction!(solve_ivp, m)?)?;
    m.add_function(wrap_pyfunction!(dense_solve_ivp, m)?)?;
    m.add_function(wrap_pyfunction!(variation_of_constants, m)?)?;
    m.add_function(wrap_pyfunction!(homogeneous_basis, m)?)?;
    m.add_function(wrap_pyfunction!(solve_bvp, m)?)?;
    m.add_function(wrap_pyfunction!(build_greens, m)?)?;
    m.add_function(wrap_pyfunction!(conjugate_greens, m)?)?;
    m.add_function(wrap_pyfunction!(compare_greens, m)?)?;
    Ok(())
}
