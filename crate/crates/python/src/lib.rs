//! Python bindings: grids, spectral fields, the hydrostatic Stokes operator,
//! the mild solver and a few lab checks.

use std::path::PathBuf;

use hydrostokes::lab::{kernel_l1_norm, recursion_bound_check, SampleSettings};
use hydrostokes::projection::{check_solenoidal, project_hydrostatic};
use hydrostokes::solver::{Solver, SolverConfig};
use hydrostokes::spectral::{forward_transform, inverse_transform, norm_anisotropic, Grid, PhysicalField, SpectralField};
use hydrostokes::stokes::{spectral_bound, HydrostaticStokes, Subspace};
use hydrostokes::workbench::{read_snapshot, write_snapshot};
use hydrostokes::Error;
use num_complex::Complex64;
use numpy::{IntoPyArray, PyArray1, PyArray4, PyReadonlyArray4};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Snapshot(_) | Error::Io(_) => PyOSError::new_err(e.to_string()),
        Error::BlowUp { .. } | Error::Diverged(_) | Error::Reality { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Grid", module = "pyhydrostokes", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrid {
    inner: Grid,
}

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (n, k, h = 1.0))]
    fn new(n: usize, k: usize, h: f64) -> PyResult<Self> {
        Ok(Self { inner: Grid::new(n, k, h).map_err(py_err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.h()
    }

    /// Vertical eigenvalues `(2k+1) pi / (2h)`.
    #[getter]
    fn lambdas<'py>(&self, py: Python<'py>) -> Bound<'py, PyArray1<f64>> {
        self.inner.basis().lambdas.clone().into_pyarray(py)
    }

    #[getter]
    fn x_nodes<'py>(&self, py: Python<'py>) -> Bound<'py, PyArray1<f64>> {
        self.inner.x_nodes().into_pyarray(py)
    }

    #[getter]
    fn z_nodes<'py>(&self, py: Python<'py>) -> Bound<'py, PyArray1<f64>> {
        self.inner.z_nodes().into_pyarray(py)
    }

    fn __repr__(&self) -> String {
        format!("Grid(n={}, k={}, h={})", self.inner.n(), self.inner.k(), self.inner.h())
    }
}

/// Coefficients of a real field in the Fourier x sine basis, shape
/// `(ncomp, N, N, K)`.
#[pyclass(name = "Field", module = "pyhydrostokes", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField {
    inner: SpectralField,
}

#[pymethods]
impl PyField {
    #[staticmethod]
    #[pyo3(signature = (grid, ncomp = 2))]
    fn zeros(grid: &PyGrid, ncomp: usize) -> Self {
        Self { inner: SpectralField::zeros(&grid.inner, ncomp) }
    }

    #[staticmethod]
    fn from_coeffs(grid: &PyGrid, coeffs: PyReadonlyArray4<'_, Complex64>) -> PyResult<Self> {
        let inner = SpectralField::from_coeffs(&grid.inner, coeffs.as_array().to_owned()).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Transform nodal values of shape `(ncomp, N, N, K)`.
    #[staticmethod]
    fn from_values(grid: &PyGrid, values: PyReadonlyArray4<'_, f64>) -> PyResult<Self> {
        let phys = PhysicalField::from_values(&grid.inner, values.as_array().to_owned()).map_err(py_err)?;
        Ok(Self { inner: forward_transform(&phys).map_err(py_err)? })
    }

    /// Smooth hydrostatically solenoidal sample, reproducible from `seed`.
    #[staticmethod]
    fn random_solenoidal(grid: &PyGrid, seed: u64) -> Self {
        let settings = SampleSettings::for_grid(grid.inner.n(), grid.inner.k(), 1, seed);
        Self { inner: settings.smooth_solenoidal(&grid.inner, 0) }
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid { inner: self.inner.grid.clone() }
    }

    #[getter]
    fn ncomp(&self) -> usize {
        self.inner.ncomp()
    }

    fn coeffs<'py>(&self, py: Python<'py>) -> Bound<'py, PyArray4<Complex64>> {
        self.inner.coeffs.clone().into_pyarray(py)
    }

    fn values<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyArray4<f64>>> {
        Ok(inverse_transform(&self.inner).map_err(py_err)?.values.into_pyarray(py))
    }

    fn l2_norm(&self) -> f64 {
        self.inner.l2_norm()
    }

    /// Horizontal `L^q` of the vertical `L^p` norm.
    #[pyo3(signature = (q = f64::INFINITY, p = 4.0))]
    fn mixed_norm(&self, q: f64, p: f64) -> PyResult<f64> {
        norm_anisotropic(&inverse_transform(&self.inner).map_err(py_err)?, q, p).map_err(py_err)
    }

    fn project(&self) -> PyResult<Self> {
        Ok(Self { inner: project_hydrostatic(&self.inner).map_err(py_err)? })
    }

    /// Largest `|div_H mean(v)|` coefficient, zero for solenoidal fields.
    fn solenoidal_defect(&self) -> f64 {
        check_solenoidal(&self.inner)
    }

    fn scaled(&self, s: f64) -> Self {
        Self { inner: self.inner.scaled(s) }
    }

    fn __add__(&self, other: &PyField) -> PyResult<Self> {
        self.check_grid(other)?;
        Ok(Self { inner: self.inner.add(&other.inner) })
    }

    fn __sub__(&self, other: &PyField) -> PyResult<Self> {
        self.check_grid(other)?;
        Ok(Self { inner: self.inner.sub(&other.inner) })
    }

    fn __repr__(&self) -> String {
        let g = &self.inner.grid;
        format!("Field(ncomp={}, n={}, k={}, h={})", self.inner.ncomp(), g.n(), g.k(), g.h())
    }
}

impl PyField {
    fn check_grid(&self, other: &PyField) -> PyResult<()> {
        if self.inner.coeffs.shape() != other.inner.coeffs.shape() {
            return Err(PyValueError::new_err("fields live on different grids"));
        }
        Ok(())
    }
}

/// The hydrostatic Stokes operator `A` on a grid, with cached matrix functions.
#[pyclass(name = "Stokes", module = "pyhydrostokes", frozen)]
struct PyStokes {
    inner: HydrostaticStokes,
}

#[pymethods]
impl PyStokes {
    #[new]
    fn new(grid: &PyGrid) -> Self {
        Self { inner: HydrostaticStokes::new(&grid.inner) }
    }

    fn apply(&self, f: &PyField) -> PyResult<PyField> {
        Ok(PyField { inner: self.inner.apply_a(&f.inner).map_err(py_err)? })
    }

    /// `e^{tA} f`.
    fn semigroup(&self, t: f64, f: &PyField) -> PyResult<PyField> {
        Ok(PyField { inner: self.inner.semigroup_apply(t, &f.inner).map_err(py_err)? })
    }

    /// `phi_1(tA) f`.
    fn phi1(&self, t: f64, f: &PyField) -> PyResult<PyField> {
        Ok(PyField { inner: self.inner.phi1_apply(t, &f.inner).map_err(py_err)? })
    }

    /// `(lambda - A)^{-1} f`.
    fn resolvent(&self, lam: Complex64, f: &PyField) -> PyResult<PyField> {
        Ok(PyField { inner: self.inner.resolvent_apply(lam, &f.inner).map_err(py_err)? })
    }

    /// Largest real part of the spectrum on `"full"` or `"solenoidal"` fields.
    #[pyo3(signature = (subspace = "solenoidal"))]
    fn spectral_bound(&self, subspace: &str) -> PyResult<f64> {
        let sub = match subspace {
            "full" => Subspace::Full,
            "solenoidal" => Subspace::Solenoidal,
            other => return Err(PyValueError::new_err(format!("unknown subspace {other:?}"))),
        };
        Ok(spectral_bound(self.inner.grid(), sub).bound)
    }
}

/// Outcome of a full solve.
#[pyclass(name = "Run", module = "pyhydrostokes", frozen, get_all)]
struct PyRun {
    times: Vec<f64>,
    energies: Vec<f64>,
    norms: Vec<f64>,
    residual: Vec<f64>,
    iterations: usize,
    converged: bool,
    delta: f64,
    final_state: PyField,
}

#[pyclass(name = "Solver", module = "pyhydrostokes", frozen)]
struct PySolver {
    inner: Solver,
}

#[pymethods]
impl PySolver {
    #[new]
    #[pyo3(signature = (n = 16, k = 16, h = 1.0, dt = 1e-3, horizon = 0.1, p = 4.0, delta = 0.01, picard_window = None, dealias = true))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        n: usize,
        k: usize,
        h: f64,
        dt: f64,
        horizon: f64,
        p: f64,
        delta: f64,
        picard_window: Option<f64>,
        dealias: bool,
    ) -> PyResult<Self> {
        let cfg = SolverConfig {
            n,
            k,
            h,
            dt,
            horizon,
            p,
            delta,
            picard_window: picard_window.unwrap_or(horizon),
            dealias,
            ..Default::default()
        };
        Ok(Self { inner: Solver::new(cfg).map_err(py_err)? })
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid { inner: self.inner.grid().clone() }
    }

    fn solve(&self, py: Python<'_>, a: &PyField) -> PyResult<PyRun> {
        let sol = py.detach(|| self.inner.full_solve(&a.inner)).map_err(py_err)?;
        let traj = &sol.trajectory;
        Ok(PyRun {
            times: traj.times.clone(),
            energies: traj.energies(),
            norms: traj.diagnostics.iter().map(|d| d.norm_inf_p).collect(),
            residual: sol.residual.clone(),
            iterations: sol.report.iterations.len(),
            converged: sol.report.converged,
            delta: sol.split.delta,
            final_state: PyField { inner: traj.states.last().expect("nonempty trajectory").clone() },
        })
    }
}

/// `(numeric, exact)` values of `|lambda| ||K_lambda||_{L^1}`.
#[pyfunction]
fn kernel_norm(lam: Complex64) -> PyResult<(f64, f64)> {
    let k = kernel_l1_norm(lam).map_err(py_err)?;
    Ok((k.numeric, k.exact))
}

/// `(ok, bound, fixed_point)` of the quadratic recursion check.
#[pyfunction]
#[pyo3(signature = (a0, c1, c2, steps = 200))]
fn recursion_check(a0: f64, c1: f64, c2: f64, steps: usize) -> PyResult<(bool, f64, f64)> {
    let r = recursion_bound_check(a0, c1, c2, steps).map_err(py_err)?;
    Ok((r.ok, r.bound, r.fixed_point))
}

#[pyfunction]
fn load_snapshot(path: PathBuf) -> PyResult<(PyField, f64)> {
    let (inner, t) = read_snapshot(&path).map_err(py_err)?;
    Ok((PyField { inner }, t))
}

#[pyfunction]
fn save_snapshot(path: PathBuf, field: &PyField, time: f64) -> PyResult<()> {
    write_snapshot(&path, &field.inner, time).map_err(py_err)
}

#[pymodule]
fn pyhydrostokes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyStokes>()?;
    m.add_class::<PySolver>()?;
    m.add_class::<PyRun>()?;
    m.add_function(wrap_pyfunction!(kernel_norm, m)?)?;
    m.add_function(wrap_pyfunction!(recursion_check, m)?)?;
    m.add_function(wrap_pyfunction!(load_snapshot, m)?)?;
    m.add_function(wrap_pyfunction!(save_snapshot, m)?)?;
    Ok(())
}
